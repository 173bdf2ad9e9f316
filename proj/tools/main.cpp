#include <iostream>

#include "wsq/cli.hpp"

int main(int argc, char** argv) { return wsq::cli::run(argc, argv, std::cout, std::cerr); }
