#include "commtrust/error.hpp"

namespace commtrust {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfiguration: return "configuration";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kKeyStrength: return "key-strength";
    case ErrorKind::kVerification: return "verification";
    case ErrorKind::kAlreadyPaired: return "already-paired";
    case ErrorKind::kDuplicatePublication: return "duplicate-publication";
    case ErrorKind::kUnknownApp: return "unknown-app";
    case ErrorKind::kNoSource: return "no-source";
    case ErrorKind::kNoMajority: return "no-majority";
    case ErrorKind::kNoVerifiers: return "no-verifiers";
    case ErrorKind::kUndefinedIndex: return "undefined-index";
    case ErrorKind::kNotResponder: return "not-responder";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kUnknownParameter: return "unknown-parameter";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace commtrust
