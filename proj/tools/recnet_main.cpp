#include "recnet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return recnet::cli_dispatch(argc, argv, std::cout, std::cerr);
}
