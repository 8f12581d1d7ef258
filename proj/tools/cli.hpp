#ifndef SYMDYN_TOOLS_CLI_HPP
#define SYMDYN_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace symdyn::cli {

enum ExitCode : int { kOk = 0, kOther = 1, kUsage = 2, kResource = 3, kPrecondition = 4 };

/// Runs the command line; args exclude the program name. Reports go to out
/// (or the --out file), diagnostics to err.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace symdyn::cli

#endif
