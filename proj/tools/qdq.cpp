#include <iostream>

#include "qdq/cli.hpp"

int main(int argc, char** argv) { return qdq::cli::run(argc, argv, std::cout, std::cerr); }
