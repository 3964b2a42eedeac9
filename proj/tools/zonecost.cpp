#include "zonecost/cli.hpp"

#include <iostream>

int main(int argc, char ** argv) { return zonecost::cli::run(argc, argv, std::cout, std::cerr); }
