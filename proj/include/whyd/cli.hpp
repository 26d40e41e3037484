#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace whyd::cli {

enum ExitCode : int { Ok = 0, Usage = 2, Semantic = 3 };

/// Runs one invocation; args excludes the program name. The report (or an
/// error object) goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whyd::cli
