#pragma once

#include "packlab/core.hpp"
#include "packlab/io.hpp"
#include "packlab/moduli.hpp"
#include "packlab/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace packlab {

struct BoundEntry {
  std::string name;
  CertifiedInterval value;
  std::string provenance;  // the argument or module operation behind the value
};

/// lhs <= rhs, evaluated with the upper end of lhs and the lower end of rhs.
struct ChainCheck {
  std::string lhs, rhs;
  double lhs_value = 0.0, rhs_value = 0.0;
  bool holds = false;
  double slack = 0.0;  // rhs_value - lhs_value
};

struct BoundReport {
  std::string space_label;
  std::vector<BoundEntry> entries;
  std::vector<ChainCheck> chain_checks;
  std::vector<std::string> notes;

  bool all_hold() const;
  const BoundEntry& entry(const std::string& name) const;
  Json to_json() const;
  std::string to_table() const;
};

/// delta(1), phi_X(1) and t_X for `space`, with the lower bound 1/(1-delta(1)),
/// the upper bounds 2/(1+phi_p(phi_X(1))) and 2 t_X, and the consistency checks
/// 1/(1-delta(1)) <= 2/(1+phi_X(1)) and 1/(1+phi_X(1)) <= t_X.
BoundReport chain_report(const Space& space, double p_outer = 1.0, const EvalBudget& budget = {},
                         std::uint64_t seed = 1);

/// Families with tabulated values of gamma and gamma*.
struct NamedFamily {
  enum class Kind { LpSum, LpMeasureSum, SeparableOctahedral, CKZeroDim, LInf, GammaTwo };
  Kind kind = Kind::LpSum;
  double p = 2.0;
  double r = 1.0;                            // outer exponent of the sum with Y (kInf allowed)
  std::optional<double> y_gamma_star;        // needed when r = inf
  std::vector<double> pk;                    // GammaTwo: leading terms of p_k (may be empty)
  std::vector<double> ms;                    // GammaTwo: ladder parameters M
};

BoundReport named_gamma(const NamedFamily& family);
NamedFamily::Kind family_kind_from_string(const std::string& name);

/// Analytic Kottman constants: K(l_p) = 2^{1/p}, K(L_p) = max{2^{1/p}, 2^{1/q}}.
double kottman_lp(double p);
double kottman_Lp(double p);

/// gamma >= 2/K.
double gamma_lower_from_kottman(double k);
/// gamma(Y) <= d_BM(X, Y) gamma(X).
double banach_mazur_transfer(double d_bm, double gamma_x);

/// 2 / (1 + phi(1)); throws InvalidInput for a non-modulus.
double phi_octahedral_upper(const Modulus& phi);

struct MinkowskiNode {
  double alpha, beta, r, p, lhs, rhs;
};
struct MinkowskiReport {
  long nodes = 0;
  long rejected = 0;  // nodes with r > p, not evaluated
  std::vector<MinkowskiNode> violations;
  double worst_margin = kInf;  // min over nodes of lhs - rhs
  bool ok() const { return violations.empty(); }
};

/// ((a^p+1)^{r/p} + b^r)^{1/r} >= ((a^r+b^r)^{p/r} + 1)^{1/p} at one node.
MinkowskiNode minkowski_node(double alpha, double beta, double r, double p);
MinkowskiReport minkowski_type_check(const std::vector<double>& alphas, const std::vector<double>& betas,
                                     const std::vector<double>& rs, const std::vector<double>& ps,
                                     double tol = 1e-12);

/// Least n >= 1 with (1 - 2^-n)^{1/p} - 2^{-n/p} >= 1 - eps.
int lp_step1_check(double p, double eps);

}  // namespace packlab
