#include <iostream>

#include "metricpc/cli.hpp"

int main(int argc, char** argv) { return metricpc::run_cli(argc, argv, std::cout, std::cerr); }
