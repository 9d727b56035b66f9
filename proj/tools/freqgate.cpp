#include <iostream>

#include "freqgate/app/cli.hpp"

int main(int argc, char** argv) { return freqgate::app::run_cli(argc, argv, std::cout, std::cerr); }
