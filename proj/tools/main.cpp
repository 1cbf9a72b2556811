#include "bayesens/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bayesens::dispatch(argc, argv, std::cout, std::cerr); }
