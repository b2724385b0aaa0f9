#include <iostream>

#include "adaprox/cli.hpp"

int main(int argc, char** argv) {
  return adaprox::run_cli(argc, argv, std::cout, std::cerr);
}
