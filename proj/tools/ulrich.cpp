#include <iostream>
#include <string>
#include <vector>

#include "ulrich/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ulrich::run_cli(args, std::cout, std::cerr);
}
