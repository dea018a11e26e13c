#include <iostream>
#include <string>
#include <vector>

#include "ctmap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ctmap::run_cli(args, std::cout);
}
