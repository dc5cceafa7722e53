#pragma once

#include <stdexcept>
#include <string>

namespace nilcut {

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kInconsistent = 3,    // presentation fails overlap checks or collection budget
  kPrecondition = 4,    // a hypothesis of the requested construction does not hold
  kNotAdaptable = 5,    // subgroup is not tail-adapted to the pc sequence
  kVerification = 6,    // a built-in certificate check failed
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInconsistent: return "inconsistent-presentation";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kNotAdaptable: return "not-adaptable";
    case ErrorCode::kVerification: return "verification";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace nilcut
