#include "reachopt/driver/cli.hpp"

int main(int argc, char** argv) { return reachopt::driver::cli_main(argc, argv); }
