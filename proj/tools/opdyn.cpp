#include <iostream>

#include "opdyn/commands.hpp"

int main(int argc, char** argv) { return opdyn::run_cli(argc, argv, std::cout, std::cerr); }
