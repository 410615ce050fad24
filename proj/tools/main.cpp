#include <iostream>

#include "tlo/cli.hpp"

int main(int argc, char** argv) { return tlo::cli::run(argc, argv, std::cout, std::cerr); }
