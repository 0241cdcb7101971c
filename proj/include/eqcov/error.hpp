#pragma once

#include <stdexcept>
#include <string>

namespace eqcov {

// Every failure mode the library reports. The C API maps these one-to-one to
// status codes; the C++ layer throws a single exception type carrying one.
enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NamedColumnMissing,
  DegenerateGroup,
  UnknownDataset,
  NotPositiveDefinite,
  InsufficientSample,
  RankDeficient,
  DegenerateData,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long detail = -1)
      : std::runtime_error(message), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }

  // Context-dependent index: failing pivot for NotPositiveDefinite, data row
  // for ParseError. Negative when not applicable.
  long detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  long detail_;
};

}  // namespace eqcov
