#include "fcomp/cli/commands.hpp"

int main(int argc, char** argv) { return fcomp::cli::run_cli(argc, argv); }
