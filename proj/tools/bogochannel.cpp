#include <iostream>

#include "bogo/cli/commands.hpp"

int main(int argc, char** argv) { return bogo::cli::dispatch(argc, argv, std::cout, std::cerr); }
