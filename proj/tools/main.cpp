#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    return minface::cli::run(argc, argv, std::cout, std::cerr);
}
