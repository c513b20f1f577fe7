#include <iostream>

#include "skewclust/bench.hpp"

int main(int argc, char** argv) { return skewclust::bench::run_cli(argc, argv, std::cout, std::cerr); }
