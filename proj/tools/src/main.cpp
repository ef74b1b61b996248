#include <iostream>
#include <string>
#include <vector>

#include "urbscale_app/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return urbscale::app::run_cli(args, std::cout, std::cerr);
}
