#include <iostream>

#include "ruledgeo/job.hpp"

int main(int argc, char** argv) { return ruledgeo::run_cli(argc, argv, std::cout, std::cerr); }
