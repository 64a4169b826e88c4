#pragma once

#include "packlab/core.hpp"
#include "packlab/norms.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace packlab {

/// phi_p(t) = (1 + t^p)^{1/p} - 1; p = inf gives max(1, t) - 1.
double phi_p(double p, double t);

class Modulus;

struct PhiPForm {
  double p;
};
struct IdentityForm {};
struct TableForm {
  std::vector<double> grid;  // increasing, grid[0] = 0
  std::vector<double> values;
  std::string provenance;
  bool is_modulus = true;  // false when t -> phi(t)/t decreases on the grid
};
struct ComposedForm {
  std::shared_ptr<const Modulus> outer;
  std::shared_ptr<const Modulus> inner;
};

/// A function phi: [0, inf) -> [0, inf), closed form or sampled.
class Modulus {
 public:
  using Form = std::variant<PhiPForm, IdentityForm, TableForm, ComposedForm>;

  static Modulus phi_p(double p);
  static Modulus identity();
  // Throws InvalidInput on malformed grids; marks (phi2) violations.
  static Modulus table(std::vector<double> grid, std::vector<double> values,
                       std::string provenance);

  double operator()(double t) const;
  const Form& form() const { return form_; }
  bool is_modulus() const;
  std::string label() const;

 private:
  explicit Modulus(Form f) : form_(std::move(f)) {}
  Form form_;
  friend Modulus compose(const Modulus&, const Modulus&);
};

/// outer o inner. Rejects inputs marked non-modulus.
Modulus compose(const Modulus& outer, const Modulus& inner);

struct AxiomReport {
  bool phi1_ok = false;
  bool phi2_ok = false;
  bool phi3_ok = false;
  bool positive = false;
  bool all() const { return phi1_ok && phi2_ok && phi3_ok; }
};

AxiomReport check_modulus_axioms(const Modulus& phi, const std::vector<double>& grid,
                                 double tol = 1e-6);

/// Modulus of convexity. hi is the best value found by multistart descent.
CertifiedInterval delta(const Space& space, double eps, const EvalBudget& budget,
                        std::uint64_t seed);

/// Local modulus at a fixed unit vector x0.
CertifiedInterval delta_local(const Space& space, const Vector& x0, double eps,
                              const EvalBudget& budget, std::uint64_t seed);

struct TangentialResult {
  CertifiedInterval value;
  Vector x;  // witness pair with x _|_ v, both unit
  Vector v;
};

/// Tangential modulus of convexity with its best witness.
TangentialResult tangential_search(const Space& space, double t, const EvalBudget& budget,
                                   std::uint64_t seed);
CertifiedInterval tangential(const Space& space, double t, const EvalBudget& budget,
                             std::uint64_t seed);

/// Tangential modulus on a grid. Every witness pair is feasible at every t,
/// so each entry is the minimum over all witnesses found on the grid.
struct TangentialTable {
  std::vector<double> grid;
  std::vector<CertifiedInterval> values;
  Modulus modulus() const;
};
TangentialTable tangential_table(const Space& space, const std::vector<double>& grid,
                                 const EvalBudget& budget, std::uint64_t seed,
                                 const std::string& provenance = "");

/// sup{t in [0,2) : delta(t) <= 1 - t} by bisection on interval outputs.
CertifiedInterval t_x(const Space& space, const EvalBudget& budget, std::uint64_t seed,
                      double tol = 1e-5);

struct GridCheck {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  bool ok = true;
};

struct InequalityReport {
  std::vector<GridCheck> checks;
  bool all_ok() const;
};

/// delta(t).lo <= 1 - sqrt(1 - t^2/4) + tol on every grid point.
InequalityReport nordlander_check(const Space& space, const std::vector<double>& grid,
                                  const EvalBudget& budget, std::uint64_t seed,
                                  double tol = 1e-9);

struct VarphiDeltaReport {
  InequalityReport item4;  // delta(t/(1+phi)) <= phi/(1+phi)
  InequalityReport item5;  // phi(t/2 - 2 delta) <= delta, where the argument is >= 0
  bool all_ok() const { return item4.all_ok() && item5.all_ok(); }
};
VarphiDeltaReport varphi_delta_inequalities(const Space& space, const std::vector<double>& grid,
                                            const EvalBudget& budget, std::uint64_t seed);

/// Evenly spaced grid of `count` points on [0, top].
std::vector<double> uniform_grid(double top, int count);

}  // namespace packlab
