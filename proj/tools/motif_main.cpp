#include "motif/cli.hpp"

#include <iostream>

int main(int argc, char ** argv)
{
    return motif::cli::run(argc, argv, std::cout, std::cerr);
}
