#include <iostream>
#include <string>
#include <vector>

#include "psos/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return psos::run_cli(args, std::cout, std::cerr);
}
