#include <iostream>

#include "ait_cli.hpp"

int main(int argc, char** argv) { return ait::cli::ait_main(argc, argv, std::cout, std::cerr); }
