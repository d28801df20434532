// Error type shared by all modules. Each error carries a category that the
// CLI maps to an exit code and a machine-readable tag.
#pragma once

#include <stdexcept>
#include <string>

namespace aniscat {

enum class ErrorCategory {
  kInvalidArgument,  // out-of-domain input to a library call
  kConfig,           // malformed or inconsistent run configuration
  kPrecondition,     // physical/numerical precondition not met
  kNumerical,        // singular pivot, overflow, non-finite result
  kIo,               // file system failures
};

// Stable lowercase tag, e.g. "config" or "numerical".
const char* category_tag(ErrorCategory category);

// Process exit code used by the CLI for a category (always nonzero).
int exit_code(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace aniscat
