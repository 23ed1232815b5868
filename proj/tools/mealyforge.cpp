#include <iostream>

#include <mealyforge/cli.hpp>

int main(int argc, char** argv) { return mealyforge::run_cli(argc, argv, std::cout, std::cerr); }
