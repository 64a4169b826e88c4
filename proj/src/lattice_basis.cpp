#include "packlab/lattice_basis.hpp"

#include <cmath>
#include <string>

namespace packlab {

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ (tag * 0x9e3779b97f4a7c15ULL));
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag) {
  // FNV-1a over the tag, then mixed with the seed.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return derive_seed(seed, h);
}

Lattice::Lattice(Matrix basis_columns) : basis_(std::move(basis_columns)) {
  if (basis_.cols() == 0) {
    gram_.resize(0, 0);
    r_.resize(0, 0);
    return;
  }
  if (basis_.cols() > basis_.rows())
    throw InvalidInput("lattice: more basis vectors than ambient dimension");
  if (!basis_.allFinite()) throw InvalidInput("lattice: non-finite basis entry");
  gram_ = basis_.transpose() * basis_;
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success)
    throw InvalidInput("lattice: basis vectors are linearly dependent");
  r_ = llt.matrixU();
  for (int i = 0; i < rank(); ++i) {
    const double bi = gram_(i, i);
    if (!(r_(i, i) * r_(i, i) > 1e-12 * bi))
      throw InvalidInput("lattice: degenerate basis (Gram determinant ~ 0)");
  }
}

Lattice Lattice::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidInput("lattice: empty basis");
  const auto n = rows.front().size();
  Matrix b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != n)
      throw InvalidInput("lattice: basis vectors of unequal length");
    for (std::size_t i = 0; i < n; ++i)
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  }
  return Lattice(std::move(b));
}

Lattice Lattice::scaled_identity(int n, double scale) {
  return Lattice(Matrix::Identity(n, n) * scale);
}

Vector Lattice::point(const Coeffs& k) const {
  return basis_ * k.cast<double>();
}

std::vector<std::vector<double>> Lattice::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(rank()));
  for (int j = 0; j < rank(); ++j) {
    out[j].resize(static_cast<std::size_t>(ambient_dim()));
    for (int i = 0; i < ambient_dim(); ++i) out[j][i] = basis_(i, j);
  }
  return out;
}

Lattice::Projection Lattice::project(const Vector& x) const {
  if (rank() == 0) return {Vector(0), x.squaredNorm()};
  Vector rhs = basis_.transpose() * x;
  // Solve R^T R c = B^T x.
  Vector y = r_.transpose().triangularView<Eigen::Lower>().solve(rhs);
  Vector c = r_.triangularView<Eigen::Upper>().solve(y);
  const double res = (x - basis_ * c).squaredNorm();
  return {std::move(c), res};
}

double Lattice::euclidean_covering_bound() const {
  double s = 0.0;
  for (int i = 0; i < rank(); ++i) s += gs_norm_sq(i);
  return 0.5 * std::sqrt(s);
}

Lattice Lattice::lll_reduced(double delta) const {
  const int m = rank();
  if (m <= 1) return *this;
  Matrix b = basis_;
  Matrix bstar(b.rows(), m);
  Matrix mu = Matrix::Zero(m, m);
  Vector bnorm(m);

  auto gram_schmidt = [&]() {
    for (int i = 0; i < m; ++i) {
      bstar.col(i) = b.col(i);
      for (int j = 0; j < i; ++j) {
        mu(i, j) = b.col(i).dot(bstar.col(j)) / bnorm(j);
        bstar.col(i) -= mu(i, j) * bstar.col(j);
      }
      bnorm(i) = bstar.col(i).squaredNorm();
    }
  };
  gram_schmidt();
  int k = 1;
  int guard = 0;
  while (k < m && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        b.col(k) -= q * b.col(j);
        gram_schmidt();
      }
    }
    if (bnorm(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bnorm(k - 1)) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      gram_schmidt();
      k = std::max(k - 1, 1);
    }
  }
  return Lattice(std::move(b));
}

EnumerationStats enumerate_ball(const Lattice& lattice, const Vector& centre,
                                double radius, const EnumerationVisitor& visit,
                                long max_nodes) {
  EnumerationStats stats;
  const int m = lattice.rank();
  if (centre.size() != lattice.ambient_dim())
    throw InvalidInput("enumerate: centre dimension mismatch");
  const auto proj = lattice.project(centre);
  double r2 = radius * radius;
  if (m == 0) {
    if (proj.residual_sq <= r2) {
      ++stats.leaves;
      visit(Coeffs(0), Vector::Zero(lattice.ambient_dim()), proj.residual_sq);
    }
    return stats;
  }
  const Matrix& R = lattice.r_factor();
  const Vector& c = proj.coords;
  std::vector<double> rsq(m), ctr(m), part(m + 1, 0.0);
  std::vector<long> k0(m), steps(m), sgn(m);
  Coeffs k(m);
  for (int i = 0; i < m; ++i) rsq[i] = R(i, i) * R(i, i);
  part[m] = proj.residual_sq;

  auto enter = [&](int i) {
    double s = c[i];
    for (int j = i + 1; j < m; ++j)
      s -= (R(i, j) / R(i, i)) * (static_cast<double>(k[j]) - c[j]);
    ctr[i] = s;
    k0[i] = std::lround(s);
    k[i] = k0[i];
    steps[i] = 0;
    sgn[i] = (s >= static_cast<double>(k0[i])) ? 1 : -1;
  };
  // Zigzag around the rounded centre: k0, k0+s, k0-s, k0+2s, ...
  auto advance = [&](int i) {
    ++steps[i];
    const long t = steps[i];
    const long mag = (t + 1) / 2;
    k[i] = k0[i] + ((t % 2 == 1) ? mag : -mag) * sgn[i];
  };

  const double slack = 1e-12;
  int i = m - 1;
  enter(i);
  while (true) {
    if (max_nodes >= 0 && stats.nodes >= max_nodes) {
      stats.aborted = true;
      break;
    }
    ++stats.nodes;
    const double d = static_cast<double>(k[i]) - ctr[i];
    const double pi = part[i + 1] + rsq[i] * d * d;
    if (pi <= r2 * (1.0 + slack) + slack) {
      if (i == 0) {
        ++stats.leaves;
        const double new_r = visit(k, lattice.point(k), pi);
        if (new_r < 0.0) {
          stats.aborted = true;
          break;
        }
        r2 = std::min(r2, new_r * new_r);
        advance(0);
      } else {
        part[i] = pi;
        --i;
        enter(i);
      }
    } else {
      ++i;
      if (i == m) break;
      advance(i);
    }
  }
  return stats;
}

}  // namespace packlab
