#include <iostream>
#include <string>
#include <vector>

#include "gl3sup/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return gl3sup::run_cli(args, std::cout, std::cerr);
}
