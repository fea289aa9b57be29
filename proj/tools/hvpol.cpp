#include <iostream>

#include "hvpol/cli.hpp"

int main(int argc, char** argv) { return hvpol::cli::run(argc, argv, std::cout, std::cerr); }
