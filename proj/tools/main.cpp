#include <iostream>

#include "fbrank/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fbrank::run_cli(args, std::cout, std::cerr);
}
