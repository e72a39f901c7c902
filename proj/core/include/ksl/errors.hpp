#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ksl {

/// Malformed input file. Carries the 1-based line number of the offending line
/// (0 when the problem is not tied to a specific line, e.g. truncated file).
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Power iteration ran out of iterations. The partial Rayleigh estimate is a
/// certified lower bound on the spectral norm: it can refute a certificate
/// condition but never wrongly confirm one.
class convergence_failure : public std::runtime_error {
 public:
  convergence_failure(const std::string& what, double lower_bound, long iterations)
      : std::runtime_error(what), lower_bound_(lower_bound), iterations_(iterations) {}

  double lower_bound() const noexcept { return lower_bound_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double lower_bound_;
  long iterations_;
};

/// Step-size underflow in the energy-guarded integrator.
class integration_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ksl
