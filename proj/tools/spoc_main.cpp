#include <iostream>

#include "spoc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return spoc::runCli(args, std::cout, std::cerr);
}
