#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dsalign/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool color = std::getenv("DSALIGN_NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  return dsalign::cli::run(args, std::cout, std::cerr, color);
}
