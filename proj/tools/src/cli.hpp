#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace borelmod::cli {

// Entry point shared by main() and the tests. args excludes the program
// name. Exit codes: 0 ok, 1 verification found an under-count, 2 usage or
// input error, 3 computation refused (guard, bad prime, time cap).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace borelmod::cli
