#include <iostream>
#include <string>
#include <vector>

#include "chemlab/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return chemlab::run_cli(args, std::cin, std::cout, std::cerr);
}
