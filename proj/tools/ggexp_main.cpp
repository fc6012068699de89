#include <iostream>

#include "ggexp/cli.hpp"

int main(int argc, char** argv) { return ggexp::cli_main(argc, argv, std::cout, std::cerr); }
