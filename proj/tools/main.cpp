#include <string>
#include <vector>

#include "circledyn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return circledyn::cli::run(args);
}
