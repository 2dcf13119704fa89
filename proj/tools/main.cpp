#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return sddtool::run(argc, argv, std::cout, std::cerr); }
