#include <iostream>
#include <string>
#include <vector>

#include "wft/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wft::run(args, std::cout, std::cerr);
}
