#include <iostream>

#include "sublink/cli.hpp"

int main(int argc, char** argv) { return sublink::cli::run(argc, argv, std::cout, std::cerr); }
