#include <iostream>
#include <string>
#include <vector>

#include "dbridge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dbridge::cli::run(args, std::cout, std::cerr);
}
