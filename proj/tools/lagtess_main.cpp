#include <string>
#include <vector>

#include "lagtess/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lagtess::run_cli(std::move(args));
}
