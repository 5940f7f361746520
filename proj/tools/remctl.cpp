#include "remctl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return remctl::cli::main(argc, argv, std::cout, std::cerr);
}
