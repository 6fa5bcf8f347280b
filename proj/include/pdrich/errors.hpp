#ifndef PDRICH_ERRORS_HPP
#define PDRICH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pdrich {

// Domain violations of parameters or data (alpha outside (0,1), k > n, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature failed to reach its requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo procedure ran out of budget (rejection starvation, too few
// conditioned runs, too few draws for a requested level).
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The exact pmf route was asked for a size above its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter fitting cannot identify (alpha, theta) from the data.
class Unidentifiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files. Carries the 1-based line number when known.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& msg, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace pdrich

#endif
