#pragma once

#include <stdexcept>
#include <string>

namespace qspec {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  DimMismatch,
  NonCommensurate,
  EmptyAnnulus,
  DomainError,
  DimCap,
  ZeroMatrix,
  AllZeroDifferences,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qspec
