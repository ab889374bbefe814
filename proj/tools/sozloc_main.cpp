#include <vector>

#include "sozloc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return sozloc::run_cli(args);
}
