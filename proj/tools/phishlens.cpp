#include <iostream>
#include <string>
#include <vector>

#include "phishlens/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return phishlens::cli::run(args, std::cout, std::cerr);
}
