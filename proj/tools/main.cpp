#include <iostream>

#include "lwhac/cli.hpp"

int main(int argc, char** argv) {
  return lwhac::run_cli(argc, argv, std::cout, std::cerr);
}
