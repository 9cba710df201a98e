#pragma once

#include <stdexcept>
#include <string>

namespace ergoalloc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph construction.
class InvalidAssembly : public Error { using Error::Error; };
class InvariantViolation : public Error { using Error::Error; };
class Infeasible : public Error { using Error::Error; };

// Argument and lookup failures.
class DomainError : public Error { using Error::Error; };
class LookupError : public Error { using Error::Error; };

// Input files.
class ParseError : public Error { using Error::Error; };
class DataError : public Error { using Error::Error; };

// Search.
class NoFeasiblePlan : public Error { using Error::Error; };
class TerminalState : public Error { using Error::Error; };
class TooLarge : public Error { using Error::Error; };
class SearchTimeout : public Error { using Error::Error; };

// Allocation.
class CalibrationMissing : public Error { using Error::Error; };

}  // namespace ergoalloc
