#include <iostream>

#include "hedmatch/cli.hpp"

int main(int argc, char** argv) { return hedmatch::cli::run(argc, argv, std::cout, std::cerr); }
