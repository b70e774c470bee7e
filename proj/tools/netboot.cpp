#include <iostream>
#include <string>
#include <vector>

#include "netboot/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return netboot::run_cli(args, std::cout, std::cerr);
}
