#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bol::cli::main(args, bol::cli::process_env(), std::cout, std::cerr);
}
