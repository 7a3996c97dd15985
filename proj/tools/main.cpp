#include <iostream>
#include <string>
#include <vector>

#include "propmeta/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return propmeta::cli::run(args, std::cin, std::cout, std::cerr);
}
