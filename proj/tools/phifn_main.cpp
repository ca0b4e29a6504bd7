#include "phifn/cli.hpp"

int main(int argc, char** argv) { return phifn::cli_main(argc, argv); }
