#include "kstab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return kstab::run_cli(argc, argv, std::cout, std::cerr); }
