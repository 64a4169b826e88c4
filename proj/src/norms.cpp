#include "packlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace packlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidInput(std::string(what) + ": exponent must be >= 1 or inf");
}

// ||(a, b)||_r for nonnegative a, b.
double pair_norm(double a, double b, double r) {
  if (std::isinf(r)) return std::max(a, b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  if (r == 1.0) return a + b;
  return m * std::pow(std::pow(a / m, r) + std::pow(b / m, r), 1.0 / r);
}

// Constants for ||.||_p against ||.||_2 on R^n.
std::pair<double, double> lp_constants(double p, int n) {
  const double nn = static_cast<double>(n);
  const double e = std::isinf(p) ? -0.5 : 1.0 / p - 0.5;
  // e <= 0 for p >= 2: ||x||_p <= ||x||_2 <= n^{-e}||x||_p.
  if (e <= 0) return {std::pow(nn, e), 1.0};
  return {1.0, std::pow(nn, e)};
}

std::vector<Vector> voronoi_relevant(const Lattice& lat) {
  const Lattice red = lat.lll_reduced();
  const double bound = 2.0 * red.euclidean_covering_bound();
  std::vector<Vector> cand;
  enumerate_ball(red, Vector::Zero(red.ambient_dim()), bound * (1.0 + 1e-9),
                 [&](const Coeffs&, const Vector& v, double d2) {
                   if (d2 > 0.0) cand.push_back(v);
                   return bound * (1.0 + 1e-9);
                 });
  // d is relevant iff <d, d'> < <d', d'> for every other candidate d' != +/-d
  // (strict: d/2 must lie on a facet, not a lower-dimensional face).
  std::vector<Vector> rel;
  for (const auto& d : cand) {
    bool ok = true;
    const double dd = d.squaredNorm();
    for (const auto& e : cand) {
      if ((e - d).norm() < 1e-9 * std::sqrt(dd) || (e + d).norm() < 1e-9 * std::sqrt(dd)) continue;
      if (d.dot(e) >= e.squaredNorm() - 1e-9 * dd) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& r : rel)
      if ((r + d).norm() < 1e-9 * std::sqrt(dd)) dup = true;
    if (!dup) rel.push_back(d);
  }
  return rel;
}

}  // namespace

double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

double lp_norm(const Vector& x, double p) {
  if (x.size() == 0) return 0.0;
  const double m = x.cwiseAbs().maxCoeff();
  if (std::isinf(p) || m == 0.0) return m;
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return m * (x / m).norm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

Space::Space(Kind kind, int dim) : kind_(std::move(kind)), dim_(dim) {
  compute_equivalence();
}

Space Space::lp(double p, int n) {
  check_exponent(p, "lp");
  if (n < 1) throw InvalidInput("lp: dimension must be positive");
  return Space(LpKind{p, n}, n);
}

Space Space::weighted_lp(double p, Vector weights) {
  check_exponent(p, "weighted lp");
  if (weights.size() < 1) throw InvalidInput("weighted lp: empty weights");
  Vector scale(weights.size());
  for (int i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw InvalidInput("weighted lp: weights must be positive and finite");
    scale[i] = std::isinf(p) ? weights[i] : std::pow(weights[i], 1.0 / p);
  }
  const int n = static_cast<int>(weights.size());
  return Space(WeightedLpKind{p, std::move(weights), std::move(scale)}, n);
}

Space Space::polytope(const std::vector<Vector>& vertices) {
  auto body = std::make_shared<const PolytopeData>(PolytopeData::from_vertices(vertices));
  const int n = body->dim;
  return Space(PolytopeKind{std::move(body)}, n);
}

Space Space::direct_sum(const Space& left, const Space& right, double r) {
  check_exponent(r, "direct sum");
  const int n = left.dim() + right.dim();
  return Space(DirectSumKind{std::make_shared<const Space>(left),
                             std::make_shared<const Space>(right), r},
               n);
}

Space Space::voronoi(const Lattice& lattice) {
  if (!lattice.full_rank() || lattice.rank() < 1)
    throw InvalidInput("voronoi: lattice must have full rank");
  auto rel = voronoi_relevant(lattice);
  std::vector<Vector> facets;
  facets.reserve(rel.size());
  for (const auto& d : rel) facets.push_back(2.0 * d / d.squaredNorm());
  auto cell = std::make_shared<const PolytopeData>(PolytopeData::from_facets(facets));
  const int n = lattice.ambient_dim();
  return Space(VoronoiKind{std::make_shared<const Lattice>(lattice), std::move(cell),
                           std::move(rel)},
               n);
}

std::string Space::label() const {
  std::ostringstream os;
  auto pstr = [](double p) {
    std::ostringstream s;
    if (std::isinf(p)) s << "inf";
    else s << p;
    return s.str();
  };
  std::visit(overloaded{
                 [&](const LpKind& k) { os << "l" << pstr(k.p) << "^" << k.n; },
                 [&](const WeightedLpKind& k) { os << "wl" << pstr(k.p) << "^" << k.weights.size(); },
                 [&](const PolytopeKind& k) {
                   os << "polytope[" << 2 * k.body->half_vertices.size() << " vertices]";
                 },
                 [&](const DirectSumKind& k) {
                   os << "(" << k.left->label() << " (+)_" << pstr(k.r) << " " << k.right->label() << ")";
                 },
                 [&](const VoronoiKind& k) {
                   os << "voronoi[" << 2 * k.relevant.size() << " facets]";
                 },
             },
             kind_);
  return os.str();
}

double Space::norm(const Vector& x) const {
  return std::visit(
      overloaded{
          [&](const LpKind& k) { return lp_norm(x, k.p); },
          [&](const WeightedLpKind& k) { return lp_norm(x.cwiseProduct(k.scale), k.p); },
          [&](const PolytopeKind& k) { return k.body->gauge(x); },
          [&](const DirectSumKind& k) {
            const int a = k.left->dim();
            const double l = k.left->norm(x.head(a));
            const double r = k.right->norm(x.tail(x.size() - a));
            return pair_norm(l, r, k.r);
          },
          [&](const VoronoiKind& k) { return k.cell->gauge(x); },
      },
      kind_);
}

bool Space::is_euclidean() const {
  if (auto* k = std::get_if<LpKind>(&kind_)) return k->p == 2.0;
  if (auto* k = std::get_if<WeightedLpKind>(&kind_))
    return k->p == 2.0 && (k->weights.array() == k->weights[0]).all() && k->weights[0] == 1.0;
  return false;
}

double Space::lp_exponent() const {
  if (auto* k = std::get_if<LpKind>(&kind_)) return k->p;
  if (auto* k = std::get_if<WeightedLpKind>(&kind_)) return k->p;
  return std::nan("");
}

void Space::compute_equivalence() {
  std::visit(overloaded{
                 [&](const LpKind& k) { std::tie(c1_, c2_) = lp_constants(k.p, k.n); },
                 [&](const WeightedLpKind& k) {
                   auto [a, b] = lp_constants(k.p, static_cast<int>(k.scale.size()));
                   c1_ = a * k.scale.minCoeff();
                   c2_ = b * k.scale.maxCoeff();
                 },
                 [&](const PolytopeKind& k) {
                   double vmax = 0.0, amax = 0.0;
                   for (const auto& v : k.body->half_vertices) vmax = std::max(vmax, v.norm());
                   for (const auto& a : k.body->half_facets) amax = std::max(amax, a.norm());
                   c1_ = 1.0 / vmax;
                   c2_ = amax;
                 },
                 [&](const DirectSumKind& k) {
                   auto [a, b] = lp_constants(k.r, 2);
                   c1_ = std::min(k.left->c1(), k.right->c1()) * a;
                   c2_ = std::max(k.left->c2(), k.right->c2()) * b;
                 },
                 [&](const VoronoiKind& k) {
                   double vmax = 0.0, dmin = kInf;
                   for (const auto& v : k.cell->half_vertices) vmax = std::max(vmax, v.norm());
                   for (const auto& d : k.relevant) dmin = std::min(dmin, d.norm());
                   c1_ = 1.0 / vmax;
                   c2_ = 2.0 / dmin;
                 },
             },
             kind_);
}

double eval_norm(const Space& space, const Vector& x) {
  if (x.size() != space.dim()) throw InvalidInput("eval_norm: dimension mismatch");
  if (!x.allFinite()) throw InvalidInput("eval_norm: non-finite coordinates");
  return space.norm(x);
}

double dual_eval(const Space& space, const Vector& f) {
  if (f.size() != space.dim()) throw InvalidInput("dual_eval: dimension mismatch");
  return std::visit(
      overloaded{
          [&](const LpKind& k) { return lp_norm(f, conjugate_exponent(k.p)); },
          [&](const WeightedLpKind& k) {
            return lp_norm(f.cwiseQuotient(k.scale), conjugate_exponent(k.p));
          },
          [&](const PolytopeKind& k) { return k.body->support(f); },
          [&](const DirectSumKind& k) {
            const int a = k.left->dim();
            const double l = dual_eval(*k.left, f.head(a));
            const double r = dual_eval(*k.right, f.tail(f.size() - a));
            return pair_norm(l, r, conjugate_exponent(k.r));
          },
          [&](const VoronoiKind&) -> double {
            throw Unsupported("dual_eval: Voronoi gauge dual is not supported");
          },
      },
      space.kind());
}

namespace {

Vector lp_functional(const Vector& x, double p, double tol) {
  const int n = static_cast<int>(x.size());
  Vector f = Vector::Zero(n);
  if (std::isinf(p)) {
    const double m = x.cwiseAbs().maxCoeff();
    int count = 0, at = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(x[i]) >= m * (1.0 - tol)) {
        ++count;
        at = i;
      }
    if (count != 1) throw NonSmoothPoint("duality_functional: l_inf point with tied maxima");
    f[at] = x[at] > 0 ? 1.0 : -1.0;
    return f;
  }
  if (p == 1.0) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(x[i]) <= tol) throw NonSmoothPoint("duality_functional: l_1 point with a zero coordinate");
      f[i] = x[i] > 0 ? 1.0 : -1.0;
    }
    return f;
  }
  for (int i = 0; i < n; ++i)
    f[i] = (x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0)) * std::pow(std::abs(x[i]), p - 1.0);
  return f;
}

// Functional at an arbitrary nonzero x, normalized so <f,x> = ||x|| and ||f||* = 1.
Vector functional_any(const Space& space, const Vector& x, double tol) {
  const double nx = space.norm(x);
  return std::visit(
      overloaded{
          [&](const LpKind& k) -> Vector {
            Vector f = lp_functional(x / nx, k.p, tol);
            return f;
          },
          [&](const WeightedLpKind& k) -> Vector {
            Vector y = x.cwiseProduct(k.scale) / nx;
            return lp_functional(y, k.p, tol).cwiseProduct(k.scale);
          },
          [&](const PolytopeKind& k) -> Vector {
            const Vector u = x / nx;
            int count = 0;
            Vector best;
            for (const auto& a : k.body->half_facets) {
              const double s = a.dot(u);
              if (std::abs(std::abs(s) - 1.0) <= tol) {
                ++count;
                best = s > 0 ? a : Vector(-a);
              }
            }
            if (count != 1) throw NonSmoothPoint("duality_functional: polytope point is not in a facet interior");
            return best;
          },
          [&](const DirectSumKind& k) -> Vector {
            const int a = k.left->dim();
            const Vector xl = x.head(a), xr = x.tail(x.size() - a);
            const double l = k.left->norm(xl), r = k.right->norm(xr);
            const double total = pair_norm(l, r, k.r);
            // Weights (s, t) norm (l, r) in the l_r plane, unit in l_r'.
            Vector lr(2);
            lr << l / total, r / total;
            double s, t;
            if (std::isinf(k.r)) {
              if (std::abs(l - r) <= tol * total) throw NonSmoothPoint("duality_functional: tied (+)_inf components");
              s = l > r ? 1.0 : 0.0;
              t = 1.0 - s;
            } else if (k.r == 1.0) {
              if (l <= tol * total || r <= tol * total)
                throw NonSmoothPoint("duality_functional: zero component in (+)_1 sum");
              s = t = 1.0;
            } else {
              s = std::pow(lr[0], k.r - 1.0);
              t = std::pow(lr[1], k.r - 1.0);
            }
            Vector f = Vector::Zero(x.size());
            if (s > 0.0) f.head(a) = s * functional_any(*k.left, xl, tol);
            if (t > 0.0) f.tail(x.size() - a) = t * functional_any(*k.right, xr, tol);
            return f;
          },
          [&](const VoronoiKind& k) -> Vector {
            const Vector u = x / nx;
            int count = 0;
            Vector best;
            for (const auto& a : k.cell->half_facets) {
              const double s = a.dot(u);
              if (std::abs(std::abs(s) - 1.0) <= tol) {
                ++count;
                best = s > 0 ? a : Vector(-a);
              }
            }
            if (count != 1) throw NonSmoothPoint("duality_functional: Voronoi point is not in a facet interior");
            return best;
          },
      },
      space.kind());
}

}  // namespace

Vector duality_functional(const Space& space, const Vector& x, double sphere_tol) {
  const double nx = eval_norm(space, x);
  if (std::abs(nx - 1.0) > sphere_tol)
    throw InvalidInput("duality_functional: point is not on the unit sphere");
  return functional_any(space, x, 1e-12);
}

bool bj_orthogonal(const Space& space, const Vector& x, const Vector& v, double tol) {
  if (x.size() != space.dim() || v.size() != space.dim())
    throw InvalidInput("bj_orthogonal: dimension mismatch");
  const double nx = eval_norm(space, x);
  const double nv = eval_norm(space, v);
  if (nx == 0.0) throw InvalidInput("bj_orthogonal: x must be nonzero");
  if (nv == 0.0) throw InvalidInput("bj_orthogonal: v must be nonzero");
  const double h = 1e-6 * std::max(1.0, nx / nv);
  const double right = (space.norm(x + h * v) - nx) / h;
  const double left = (nx - space.norm(x - h * v)) / h;
  return left <= tol && right >= -tol;
}

std::vector<Vector> sphere_sample(const Space& space, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sphere_sample: count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Vector z(space.dim());
    for (int i = 0; i < z.size(); ++i) z[i] = g(rng);
    const double nz = space.norm(z);
    if (!(nz > 0.0)) continue;
    Vector u = z / nz;
    // One correction step keeps the residual at the rounding level.
    u /= space.norm(u);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace packlab
