#include <iostream>
#include <string>
#include <vector>

#include "mdisc/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mdisc::cli::run(args, std::cout, std::cerr);
}
