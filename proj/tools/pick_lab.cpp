#include <iostream>
#include <string>
#include <vector>

#include "picklab/cli.hpp"

int main(int argc, char** argv) {
    return picklab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
