#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace g2kit::cli {

// Exit codes: 0 success, 1 failed check or runtime error, 2 malformed flags.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace g2kit::cli
