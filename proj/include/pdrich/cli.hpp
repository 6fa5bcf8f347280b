#ifndef PDRICH_CLI_HPP
#define PDRICH_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace pdrich {

inline constexpr const char* kToolName = "pdrich";
inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdrich

#endif
