#include <iostream>
#include <string>
#include <vector>

#include "wlkit_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wlkit::cli::run(std::move(args), std::cout, std::cerr);
}
