#include <iostream>

#include "qineq/cli.hpp"

int main(int argc, char** argv) {
  return qineq::cli::main(argc, argv, std::cout, std::cerr);
}
