#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace feigen {

enum class ErrorCode {
  SingularMatrix,
  ExactlySingular,
  NoConvergence,
  DivideByZero,
  InvalidIndex,
  SingularJacobian,
  NoExplicitForm,
  AmbiguousMatch,
  WrongBranch,
  InvalidArgument,
  MissingArtifact,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace feigen
