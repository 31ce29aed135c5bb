#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace warrantscore::cli {

// Exit code contract: 0 success, 2 configuration error, 3 partial pipeline
// failure, 4 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPartial = 3;
inline constexpr int kExitData = 4;

// Runs one CLI invocation (args exclude the program name). Summaries and
// diagnostics go to `out`/`err`; result files are written atomically under
// the configured output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace warrantscore::cli
