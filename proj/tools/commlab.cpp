#include <iostream>

#include "commlab/cli.hpp"

int main(int argc, char** argv) { return commlab::run_cli(argc, argv, std::cout, std::cerr); }
