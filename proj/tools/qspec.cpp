#include <iostream>
#include <string>
#include <vector>

#include "qspec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qspec::dispatch(args, std::cout, std::cerr);
}
