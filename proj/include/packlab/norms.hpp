#pragma once

#include "packlab/core.hpp"
#include "packlab/lattice_basis.hpp"
#include "packlab/polytope.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace packlab {

class Space;

struct LpKind {
  double p;  // kInf for the sup norm
  int n;
};

// ||x|| = || scale .* x ||_p, scale_i = w_i^{1/p} (w_i for p = inf).
struct WeightedLpKind {
  double p;
  Vector weights;
  Vector scale;
};

struct PolytopeKind {
  std::shared_ptr<const PolytopeData> body;
};

struct DirectSumKind {
  std::shared_ptr<const Space> left;
  std::shared_ptr<const Space> right;
  double r;
};

// Norm whose unit ball is the Euclidean Voronoi cell of a full-rank lattice.
struct VoronoiKind {
  std::shared_ptr<const Lattice> lattice;
  std::shared_ptr<const PolytopeData> cell;
  std::vector<Vector> relevant;  // Voronoi-relevant vectors, +/- once
};

/// A finite-dimensional normed space given by a gauge recipe. Cheap to copy.
class Space {
 public:
  using Kind = std::variant<LpKind, WeightedLpKind, PolytopeKind, DirectSumKind,
                            VoronoiKind>;

  static Space lp(double p, int n);
  static Space weighted_lp(double p, Vector weights);
  static Space polytope(const std::vector<Vector>& vertices);
  static Space direct_sum(const Space& left, const Space& right, double r);
  static Space voronoi(const Lattice& lattice);

  int dim() const { return dim_; }
  const Kind& kind() const { return kind_; }
  std::string label() const;

  // Plain gauge evaluation with no dimension check (hot path).
  double norm(const Vector& x) const;

  // Hilbert-space detection (Euclidean norm up to no rescaling).
  bool is_euclidean() const;
  // Exponent of a (weighted) l_p space, or NaN otherwise.
  double lp_exponent() const;

  // Norm-equivalence constants c1 ||x||_2 <= ||x|| <= c2 ||x||_2.
  double c1() const { return c1_; }
  double c2() const { return c2_; }

 private:
  Space(Kind kind, int dim);
  void compute_equivalence();

  Kind kind_;
  int dim_ = 0;
  double c1_ = 1.0;
  double c2_ = 1.0;
};

/// ||x||; throws InvalidInput on dimension mismatch or non-finite input.
double eval_norm(const Space& space, const Vector& x);

/// sup{<f,x> : ||x|| <= 1}; VoronoiGauge signals Unsupported.
double dual_eval(const Space& space, const Vector& f);

/// The unique norming functional at a smooth unit vector x. Throws
/// NonSmoothPoint when the supporting functional is not unique.
Vector duality_functional(const Space& space, const Vector& x,
                          double sphere_tol = 1e-9);

/// Birkhoff-James orthogonality x _|_ v decided from one-sided difference
/// quotients of lambda -> ||x + lambda v|| at 0.
bool bj_orthogonal(const Space& space, const Vector& x, const Vector& v,
                   double tol);

/// Gaussian draws normalized onto the unit sphere, deterministic in seed.
std::vector<Vector> sphere_sample(const Space& space, int count,
                                  std::uint64_t seed);

/// Norm of a vector in l_p (p may be kInf), computed with scaling.
double lp_norm(const Vector& x, double p);

/// Conjugate exponent: 1/p + 1/q = 1 (1 <-> inf).
double conjugate_exponent(double p);

}  // namespace packlab
