#include <iostream>
#include <string>
#include <vector>

#include "reebmm/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return reebmm::cli::run(args, std::cout, std::cerr);
}
