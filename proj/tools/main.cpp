#include <string>
#include <vector>

#include "mcflab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mcflab::run_cli(args);
}
