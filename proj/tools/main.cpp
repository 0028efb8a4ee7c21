#include <iostream>

#include "soilab/cli.hpp"

int main(int argc, char** argv) {
  return soilab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
