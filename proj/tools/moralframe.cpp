#include <iostream>
#include <string>
#include <vector>

#include "moralframe/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return moralframe::cli::run(args, std::cout, std::cerr);
}
