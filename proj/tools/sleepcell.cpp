#include <iostream>

#include "sleepcell/cli.hpp"

int
main (int argc, char **argv)
{
  return sleepcell::run_cli (argc, argv, std::cout, std::cerr);
}
