#include <iostream>

#include "sudlerlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sudlerlab::run_cli(args, std::cout, std::cerr);
}
