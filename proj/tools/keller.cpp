#include <iostream>

#include "keller/cli.hpp"

int main(int argc, char** argv) { return keller::run_cli(argc, argv, std::cout, std::cerr); }
