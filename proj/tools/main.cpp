#include <string>
#include <vector>

#include "climb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return climb::cli::run(std::move(args));
}
