#ifndef RELSTRING_ERRORS_HPP
#define RELSTRING_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace relstring {

enum class ErrorCode {
  NonRegularCurve,
  TooFewSamples,
  NotStrictlyAdmissible,
  MonotonicityLost,
  NotNormalized,
  NonZeroMeanVelocity,
  NotZeroVelocity,
  NotConvex,
  RootNotBracketed,
  OutsideDomain,
  WrongDimension,
  NoCollapseAtTbar,
  OddK,
  ParamsInfeasible,
  BadEps,
  BadParams,
  InvalidLoop,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRegularCurve: return "NonRegularCurve";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotStrictlyAdmissible: return "NotStrictlyAdmissible";
    case ErrorCode::MonotonicityLost: return "MonotonicityLost";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonZeroMeanVelocity: return "NonZeroMeanVelocity";
    case ErrorCode::NotZeroVelocity: return "NotZeroVelocity";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::NoCollapseAtTbar: return "NoCollapseAtTbar";
    case ErrorCode::OddK: return "OddK";
    case ErrorCode::ParamsInfeasible: return "ParamsInfeasible";
    case ErrorCode::BadEps: return "BadEps";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::InvalidLoop: return "InvalidLoop";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit codes and prints error_name() on stderr.
class StringError : public std::runtime_error {
 public:
  StringError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw StringError(code, what);
}

}  // namespace relstring

#endif  // RELSTRING_ERRORS_HPP
