#include <iostream>

#include "momentcut/cli.hpp"

int main(int argc, char** argv) { return momentcut::run_cli(argc, argv, std::cout, std::cerr); }
