#include <iostream>

#include "wshift/cli.hpp"

int main(int argc, char** argv) { return wshift::cli::dispatch(argc, argv, std::cout, std::cerr); }
