#include <iostream>

#include "govsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return govsim::cli::main(args, std::cout, std::cerr);
}
