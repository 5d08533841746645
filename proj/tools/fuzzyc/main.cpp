#include <iostream>

#include "fuzzyc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fuzzyc::cli::run(args, std::cout, std::cerr);
}
