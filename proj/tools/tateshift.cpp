#include <iostream>

#include "tateshift/cli.hpp"

int main(int argc, char** argv) { return tss::run_cli(argc, argv, std::cout, std::cerr); }
