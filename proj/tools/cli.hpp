#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace casesens::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kDataError = 2;
inline constexpr int kStatisticalError = 3;

// Runs the command line `args` (without the program name). Results go to
// `out`; errors go to `err` as one JSON object per line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casesens::cli
