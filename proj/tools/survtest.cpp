#include <iostream>
#include <string>
#include <vector>

#include "survtest/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return survtest::cli::run(args, std::cout, std::cerr);
}
