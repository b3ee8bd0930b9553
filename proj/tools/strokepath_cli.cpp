#include <iostream>

#include "strokepath/cli.hpp"

int main(int argc, char** argv) { return strokepath::run_cli(argc, argv, std::cout, std::cerr); }
