#include <iostream>

#include "hopper/cli.hpp"

int main(int argc, char** argv) { return hopper::cli::run(argc, argv, std::cout, std::cerr); }
