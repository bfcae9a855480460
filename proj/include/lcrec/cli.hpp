#pragma once

namespace lcrec {

// Entry point shared by the lcrec binary and the tests.
// Returns 0 on success, 2 on invalid configuration or input, 3 on I/O failure.
int cli_main(int argc, char** argv);

} // namespace lcrec
