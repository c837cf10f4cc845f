#ifndef QRESP_TOOLS_CLI_H_
#define QRESP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace qresp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one `qresp` invocation. `args` excludes the program name. Returns 0 on
// success, 1 on a usage error and 2 when the input data is rejected.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qresp

#endif  // QRESP_TOOLS_CLI_H_
