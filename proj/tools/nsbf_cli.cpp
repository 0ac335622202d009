#include <iostream>

#include "nsbf/cli.hpp"

int main(int argc, char** argv) { return nsbf::cli::main_entry(argc, argv, std::cout, std::cerr); }
