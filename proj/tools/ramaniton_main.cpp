#include <iostream>
#include <string>
#include <vector>

#include "ramaniton/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ramaniton::cli::run_cli(args, std::cout, std::cerr);
}
