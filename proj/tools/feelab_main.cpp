#include <iostream>
#include <string>
#include <vector>

#include "feelab/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return feelab::cli::run(args, std::cout, std::cerr);
}
