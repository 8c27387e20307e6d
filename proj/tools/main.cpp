#include "nlaffine/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nlaffine::run_cli(argc, argv, std::cout, std::cerr); }
