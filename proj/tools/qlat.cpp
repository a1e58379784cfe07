#include <iostream>

#include "qlat/cli.hpp"

int main(int argc, char** argv) { return qlat::run_cli(argc, argv, std::cout, std::cerr); }
