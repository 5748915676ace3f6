#ifndef RELSTRING_TOOLS_CLI_HPP
#define RELSTRING_TOOLS_CLI_HPP

#include <string>
#include <vector>

namespace relstring::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kScenarioError = 3;
inline constexpr int kNumericalError = 4;

/// Entry point shared by the executable and the tests.
int main(const std::vector<std::string>& args);

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

/// Concurrency cap from RELSTRING_THREADS (defaults to hardware concurrency).
unsigned thread_cap();

}  // namespace relstring::cli

#endif  // RELSTRING_TOOLS_CLI_HPP
