#include <iostream>
#include <string>
#include <vector>

#include "bsc/cli.hpp"

int main(int argc, char** argv) {
    return bsc::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
