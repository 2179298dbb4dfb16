#include <iostream>

#include "citmatch/pipeline.hpp"

int main(int argc, char **argv) {
    return citmatch::cli::main_with_args(argc, argv, std::cout, std::cerr);
}
