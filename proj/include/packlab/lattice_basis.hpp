#pragma once

#include "packlab/core.hpp"

#include <functional>
#include <vector>

namespace packlab {

using Coeffs = Eigen::Matrix<long, Eigen::Dynamic, 1>;

/// A discrete subgroup of R^n spanned by m <= n linearly independent vectors.
/// Basis vectors are stored as columns; the Gram matrix and its Cholesky
/// factor are computed once at construction.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(Matrix basis_columns);

  static Lattice from_rows(const std::vector<std::vector<double>>& rows);
  static Lattice scaled_identity(int n, double scale);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  bool full_rank() const { return rank() == ambient_dim(); }

  const Matrix& basis() const { return basis_; }
  Vector basis_vector(int i) const { return basis_.col(i); }
  const Matrix& gram() const { return gram_; }
  // Upper-triangular R with B = Q R (so gram = R^T R).
  const Matrix& r_factor() const { return r_; }
  double gs_norm_sq(int i) const { return r_(i, i) * r_(i, i); }

  Vector point(const Coeffs& k) const;
  std::vector<std::vector<double>> rows() const;

  struct Projection {
    Vector coords;       // real coordinates of the in-span component
    double residual_sq;  // squared Euclidean norm of the orthogonal part
  };
  Projection project(const Vector& x) const;

  Lattice scaled(double c) const { return Lattice(basis_ * c); }
  Lattice lll_reduced(double delta = 0.99) const;

  // Upper bound on the Euclidean covering radius: half the root of the sum
  // of squared Gram-Schmidt norms (Babai rounding bound).
  double euclidean_covering_bound() const;

 private:
  Matrix basis_;
  Matrix gram_;
  Matrix r_;
};

/// Visitor for Euclidean enumeration. Receives the integer coefficients, the
/// lattice point and its squared Euclidean distance to the centre. Returns the
/// (possibly shrunk) Euclidean radius to continue with; returning a negative
/// value aborts the enumeration.
using EnumerationVisitor =
    std::function<double(const Coeffs&, const Vector&, double)>;

struct EnumerationStats {
  long nodes = 0;
  long leaves = 0;
  bool aborted = false;
};

/// Schnorr-Euchner enumeration of all lattice points within Euclidean
/// distance `radius` of `centre` (centre may lie outside the span).
EnumerationStats enumerate_ball(const Lattice& lattice, const Vector& centre,
                                double radius, const EnumerationVisitor& visit,
                                long max_nodes = -1);

}  // namespace packlab
