#include <iostream>

#include "srnorder/cli.hpp"

int main(int argc, char** argv) { return srnorder::run_cli(argc, argv, std::cout, std::cerr); }
