#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace dpot::cli {

inline int run(const std::vector<std::string>& args) {
    (void)args;
    std::cerr << "dpot: not yet wired up\n";
    return 1;
}

}  // namespace dpot::cli
