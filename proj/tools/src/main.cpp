#include <iostream>

#include "corrsim_cli/commands.hpp"

int main(int argc, char** argv) {
  return corrsim_cli::run_cli(argc, argv, std::cout, std::cerr);
}
