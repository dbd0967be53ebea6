#include <iostream>

#include "lagtomo/cli.hpp"

int main(int argc, char** argv) { return lagtomo::cli_main(argc, argv, std::cout, std::cerr); }
