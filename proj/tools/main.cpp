#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return g2kit::cli::run(argc, argv, std::cout, std::cerr); }
