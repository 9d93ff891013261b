#include <iostream>

#include "imkit/cli.hpp"

int main(int argc, char** argv) { return imkit::run_cli(argc, argv, std::cout, std::cerr); }
