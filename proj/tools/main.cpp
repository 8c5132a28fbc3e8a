#include "cli/commands.hpp"

int main(int argc, char** argv) { return cmaeig::cli::run_cli(argc, argv); }
