#include <iostream>
#include <string>
#include <vector>

#include "ndsys/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ndsys::cli::run(args, std::cout, std::cerr);
}
