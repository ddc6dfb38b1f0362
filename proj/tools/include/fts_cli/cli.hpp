#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fts::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int { kAffirmative = 0, kNegative = 1, kError = 2 };

// Runs the fts command line; args excludes the program name. JSON goes to
// `out`, summaries and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fts::cli
