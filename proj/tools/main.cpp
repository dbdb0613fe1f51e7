#include <iostream>
#include <string>
#include <vector>

#include "automode/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return automode::dispatch(args, std::cout, std::cerr);
}
