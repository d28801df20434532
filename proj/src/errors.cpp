#include "aniscat/errors.hpp"

namespace aniscat {

const char* category_tag(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument:
      return "invalid_argument";
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kPrecondition:
      return "precondition";
    case ErrorCategory::kNumerical:
      return "numerical";
    case ErrorCategory::kIo:
      return "io";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument:
      return 3;
    case ErrorCategory::kConfig:
      return 2;
    case ErrorCategory::kPrecondition:
      return 4;
    case ErrorCategory::kNumerical:
      return 5;
    case ErrorCategory::kIo:
      return 6;
  }
  return 1;
}

}  // namespace aniscat
