#include <iostream>

#include "pdcov/cli.hpp"

int main(int argc, char** argv) { return pdcov::run_cli(argc, argv, std::cout, std::cerr); }
