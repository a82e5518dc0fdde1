#include "conceptid/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return conceptid::run_cli(argc, argv, std::cout, std::cerr);
}
