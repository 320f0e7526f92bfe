#include <iostream>

#include "expose/cli/commands.hpp"

int main(int argc, char** argv) { return expose::cli::run_cli(argc, argv, std::cout, std::cerr); }
