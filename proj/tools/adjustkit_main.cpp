#include <iostream>
#include <string>
#include <vector>

#include "adjustkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return adjustkit::run_cli(args, std::cout, std::cerr);
}
