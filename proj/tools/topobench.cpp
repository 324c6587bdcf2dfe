#include <iostream>

#include "topobench/cli.hpp"

int main(int argc, char** argv) { return topobench::cli::main_entry(argc, argv, std::cout, std::cerr); }
