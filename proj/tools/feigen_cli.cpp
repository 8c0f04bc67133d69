#include <iostream>

#include "feigen/cli.hpp"

int main(int argc, char** argv) {
  return feigen::run_cli(argc, argv, std::cout, std::cerr);
}
