#include <iostream>

#include "peri_richards/cli.hpp"

int main(int argc, char** argv) {
    return peri_richards::cli::run_command(argc, argv, std::cout, std::cerr);
}
