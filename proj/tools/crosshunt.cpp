#include <iostream>

#include "crosshunt/cli.hpp"

int main(int argc, char** argv) { return crosshunt::run_cli(argc, argv, std::cout, std::cerr); }
