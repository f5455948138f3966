#include <iostream>

#include "mrdm_cli.hpp"

int main(int argc, char** argv) {
    return mrdm::cli::run(argc, argv, std::cout, std::cerr);
}
