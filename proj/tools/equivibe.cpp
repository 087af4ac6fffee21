#include <iostream>
#include <string>
#include <vector>

#include "equivibe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return equivibe::run_cli(args, std::cout, std::cerr);
}
