#pragma once

#include <stdexcept>

namespace cpmon {

// Process exit codes shared by the library error types and the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 2,
  kExitConstraintError = 3,
  kExitSaturatedThreshold = 4,
};

// Malformed input: bad JSON, wrong field types, records that declare both
// or neither of probs/logits.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a contract: out-of-range epsilon,
// missing labels, class-count mismatches, empty datasets.
class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpmon
