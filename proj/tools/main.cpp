#include "lcrec/cli.hpp"

int main(int argc, char** argv) { return lcrec::cli_main(argc, argv); }
