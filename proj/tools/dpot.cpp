#include "dpot/cli.hpp"

int main(int argc, char** argv) {
    return dpot::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
