#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lethargy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A norm, chain, or sequence description that cannot be evaluated.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of a construction does not hold for the input.
/// `condition()` names the hypothesis so callers can report it verbatim.
class PreconditionError : public Error {
 public:
  PreconditionError(std::string condition, const std::string& detail)
      : Error(condition + ": " + detail), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// Condition names shared by the library, the CLI and the tests.
namespace condition {
inline constexpr const char* kSummability =
    "summability condition violated (sum_{j>=n} 2^(j-n) e_j < min{e_(n-1), d_(n,V)} must hold strictly)";
inline constexpr const char* kRapidDecrease =
    "rapid decrease violated (e_n >= 3 e_(n+1) required; use construct_sandwich)";
inline constexpr const char* kDegenerateChain =
    "degenerate chain (d_V = 0 and e_n is not dominated by d_(n,V); the sandwich holds only for e_n < d_(n,V))";
inline constexpr const char* kTailDomination =
    "tail domination violated (e_n >= sum_{j>n} e_j required)";
inline constexpr const char* kRatioTest =
    "ratio condition violated (e_n >= (2+eps) e_(n+1) with eps > 0 required)";
inline constexpr const char* kSequence = "invalid target sequence";
}  // namespace condition

}  // namespace lethargy
