#include <iostream>

#include "orbitfam/cli/commands.hpp"

int main(int argc, char** argv) { return orbitfam::cli::run_cli(argc, argv, std::cout, std::cerr); }
