#include <iostream>
#include <string>
#include <vector>

#include "opquot/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return opquot::cli::run(args, std::cout, std::cerr);
}
