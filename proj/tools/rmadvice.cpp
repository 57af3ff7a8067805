#include <iostream>

#include "rmadvice/cli.hpp"

int main(int argc, char** argv) { return rmadvice::run_cli(argc, argv, std::cout, std::cerr); }
