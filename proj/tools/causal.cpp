#include <iostream>
#include <string>
#include <vector>

#include "causal/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causal::cli::main(args, std::cout, std::cerr);
}
