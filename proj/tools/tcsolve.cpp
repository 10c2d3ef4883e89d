#include <iostream>

#include "tcq/cli.hpp"

int main(int argc, char** argv) { return tcq::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
