#include <iostream>
#include <string>
#include <vector>

#include "nc2/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nc2::cli::run(args, std::cout, std::cerr);
}
