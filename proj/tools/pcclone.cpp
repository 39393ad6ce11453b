#include <iostream>

#include "pcclone/cli.hpp"

int main(int argc, char** argv) { return pcclone::cli::run(argc, argv, std::cout, std::cerr); }
