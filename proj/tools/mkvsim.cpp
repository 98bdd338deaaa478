#include <iostream>

#include "mkv/cli.hpp"

int main(int argc, char** argv) { return mkv::cli::main_entry(argc, argv, std::cout, std::cerr); }
