#include <iostream>

#include "quadblockade/cli/app.hpp"

int main(int argc, char** argv) { return quadblockade::cli::run(argc, argv, std::cout, std::cerr); }
