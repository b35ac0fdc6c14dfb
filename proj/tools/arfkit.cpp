#include "arfkit/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return arfkit::cli::main_entry(argc, argv, std::cout, std::cerr);
}
