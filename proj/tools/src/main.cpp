#include <iostream>
#include <string>
#include <vector>

#include "drlr/cli/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return drlr::cli::run(args, std::cout, std::cerr);
}
