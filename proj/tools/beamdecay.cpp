#include <iostream>

#include "beamdecay/cli.hpp"

int main(int argc, char** argv) {
  return beamdecay::run_cli(argc, argv, std::cout, std::cerr);
}
