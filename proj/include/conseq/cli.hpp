#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace conseq {

/// Runs one CLI invocation (args exclude the program name) against the
/// given streams. Exit status: 0 success, 1 data/validation error,
/// 2 artifact/version error.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace conseq
