#include "ekwhitham/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ekw::run_cli(argc, argv, std::cout, std::cerr); }
