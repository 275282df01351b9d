#include <iostream>

#include "qwi/cli.hpp"

int main(int argc, char** argv) {
    return qwi::cli::main_entry(argc, argv, std::cout, std::cerr);
}
