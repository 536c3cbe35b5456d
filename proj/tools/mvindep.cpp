#include <iostream>

#include "mvindep/cli.hpp"

int main(int argc, char** argv) { return mvindep::cli::run(argc, argv, std::cout, std::cerr); }
