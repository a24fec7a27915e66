#include <iostream>
#include <string>
#include <vector>

#include "gymnav/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  gymnav::Registry registry;
  try {
    registry = gymnav::Registry::from_environment();
  } catch (const std::exception& e) {
    std::cerr << "error: loading worlds: " << e.what() << "\n";
    return gymnav::cli::kIoError;
  }
  return gymnav::cli::run(args, registry, std::cout, std::cerr);
}
