#include <string>
#include <vector>

#include "subcrit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return subcrit::run_cli(args);
}
