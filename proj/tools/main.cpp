#include <iostream>
#include <vector>

#include "rankc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rankc::run_cli(args, std::cout, std::cerr);
}
