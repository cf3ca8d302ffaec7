#include <iostream>
#include <string>
#include <vector>

#include "wsnfd/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return wsnfd::run_cli(args, std::cout, std::cerr);
}
