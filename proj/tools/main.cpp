#include "hcol/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return hcol::parse_and_dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
