#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace propmeta::cli {

/// Entry point of the prop-meta tool. Writes results to `out` unless --out
/// names a file, errors to `err`. Returns the process exit status:
/// 0 clean, 2 completed with Error-severity findings, 1 failed to run.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

/// Parses "a,b,c" or "start:stop:step" (inclusive stop) into values.
std::vector<double> parse_grid(const std::string& text);

}  // namespace propmeta::cli
