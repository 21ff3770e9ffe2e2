#include <iostream>

#include "conan/cli.h"

int main(int argc, char** argv) {
  return conan::run_cli(argc, argv, std::cout, std::cerr);
}
