#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace commtrust {

enum class ErrorKind {
  kConfiguration,
  kInvalidArgument,
  kKeyStrength,
  kVerification,
  kAlreadyPaired,
  kDuplicatePublication,
  kUnknownApp,
  kNoSource,
  kNoMajority,
  kNoVerifiers,
  kUndefinedIndex,
  kNotResponder,
  kValidation,
  kUnknownParameter,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and tests)
/// can tell protocol outcomes such as "no majority" apart from misuse.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace commtrust
