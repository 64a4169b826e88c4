#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace packlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. The CLI maps InvalidInput to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class NonSmoothPoint : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// A closed interval [lo, hi] together with the name of the argument that
/// produced it. Numeric estimates of moduli, covering radii and packing
/// constants leave the library only in this form.
struct CertifiedInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::string method;
  long evaluations = 0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x, double tol = 0.0) const {
    return x >= lo - tol && x <= hi + tol;
  }
  bool intersects(double a, double b, double tol = 0.0) const {
    return hi >= a - tol && lo <= b + tol;
  }

  static CertifiedInterval exact(double v, std::string method) {
    return {v, v, std::move(method), 0};
  }
};

/// Caps on the work a randomized search may perform.
struct EvalBudget {
  long max_evaluations = 20'000'000;  // norm evaluations per call
  int starts = 64;                    // multi-start count
};

/// Deterministic derivation of a child seed from a parent seed and a tag,
/// so one invocation seed fans out to independent module streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag);

}  // namespace packlab
