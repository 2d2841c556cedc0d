#include <iostream>

#include "lexspectra/cli.hpp"

int main(int argc, char** argv) { return lexspectra::cli::main_entry(argc, argv, std::cout, std::cerr); }
