#include <iostream>

#include "mfe_cli.hpp"

int main(int argc, char** argv) { return mfe::cli::run_cli(argc, argv, std::cout, std::cerr); }
