#include <iostream>

#include "randopt/cli.hpp"

int main(int argc, char** argv) { return randopt::cli::run(argc, argv, std::cout, std::cerr); }
