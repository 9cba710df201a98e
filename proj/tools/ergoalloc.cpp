#include <iostream>

#include "ergoalloc/cli.hpp"

int main(int argc, char** argv) { return ergoalloc::run_cli(argc, argv, std::cout, std::cerr); }
