#include "vempb_cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return vempb::cli::run(argc, argv, std::cout, std::cerr); }
