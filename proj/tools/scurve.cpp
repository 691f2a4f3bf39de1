#include <iostream>

#include "scurve/cli.hpp"

int main(int argc, char** argv) { return scurve::run_cli(argc, argv, std::cout, std::cerr); }
