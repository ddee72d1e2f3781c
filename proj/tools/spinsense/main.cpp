#include <iostream>
#include <string>
#include <vector>

#include "spinsense/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spinsense::cli::run_app(args, std::cout, std::cerr);
}
