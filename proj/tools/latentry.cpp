#include <string>
#include <vector>

#include "latentry/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return latentry::run_cli(args);
}
