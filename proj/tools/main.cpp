#include <iostream>

#include "lplab/cli.hpp"

int main(int argc, char** argv) { return lplab::run_cli(argc, argv, std::cout, std::cerr); }
