#include <iostream>

#include "stateid/cli.hpp"

int main(int argc, char** argv) { return stateid::run_cli(argc, argv, std::cout, std::cerr); }
