#include <sftorus/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  return sftorus::cli::run_cli(argc, argv, std::cout, std::cerr);
}
