#include "modlift/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return modlift::cli::run(argc, argv, std::cout, std::cerr); }
