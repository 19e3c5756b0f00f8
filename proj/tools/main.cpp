#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "pointerlab/parallel.hpp"

int main(int argc, char** argv) {
  pointerlab::configure_threads_from_env();
  std::vector<std::string> args(argv + 1, argv + argc);
  return pointerlab::cli::run(args, std::cout, std::cerr);
}
