#include "singlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return singlab::main_entry(argc, argv, std::cout, std::cerr); }
