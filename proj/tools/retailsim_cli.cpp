#include <iostream>

#include "retailsim/cli.hpp"

int main(int argc, char** argv) { return retailsim::run_cli(argc, argv, std::cout, std::cerr); }
