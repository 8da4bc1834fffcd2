#include <iostream>

#include "sfwm/cli.hpp"

int main(int argc, char** argv) { return sfwm::run_command(argc, argv, std::cout, std::cerr); }
