#include <iostream>
#include <string>
#include <vector>

#include "kscars/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kscars::execute(args, std::cout, std::cerr);
}
