#include "simplexvol/cli.hpp"

int main(int argc, char** argv) { return simplexvol::cli::run_main(argc, argv); }
