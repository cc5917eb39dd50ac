#include <iostream>
#include <vector>

#include "opuc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return opuc::run_cli(args, std::cout, std::cerr);
}
