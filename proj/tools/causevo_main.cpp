#include <iostream>
#include <string>
#include <vector>

#include "causevo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return causevo::run_cli(args, std::cout, std::cerr);
}
