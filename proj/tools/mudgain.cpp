#include <mudgain/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return mudgain::cli::run(argc, argv, std::cout, std::cerr); }
