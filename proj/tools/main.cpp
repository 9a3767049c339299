#include <iostream>
#include <string>
#include <vector>

#include "adaptea/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return adaptea::cli::cli_run(args, std::cout, std::cerr);
}
