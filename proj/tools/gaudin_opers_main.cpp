#include <iostream>

#include "gaudinopers/cli.hpp"

int main(int argc, char** argv) {
  return gop::cli_main(argc, argv, std::cout, std::cerr);
}
