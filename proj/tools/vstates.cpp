#include "vstates/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return vstates::cli::run(argc, argv, std::cout, std::cerr); }
