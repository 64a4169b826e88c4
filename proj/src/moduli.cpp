#include "packlab/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
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

constexpr double kPenalty = 10.0;

bool is_hilbert(const Space& s) {
  if (auto* k = std::get_if<LpKind>(&s.kind())) return k->p == 2.0;
  if (auto* k = std::get_if<WeightedLpKind>(&s.kind())) return k->p == 2.0;
  if (auto* k = std::get_if<DirectSumKind>(&s.kind()))
    return k->r == 2.0 && is_hilbert(*k->left) && is_hilbert(*k->right);
  return false;
}

// Smooth away from the origin, so the duality functional always exists.
bool is_smooth(const Space& s) {
  auto interior = [](double p) { return p > 1.0 && std::isfinite(p); };
  if (auto* k = std::get_if<LpKind>(&s.kind())) return interior(k->p) || k->n == 1;
  if (auto* k = std::get_if<WeightedLpKind>(&s.kind())) return interior(k->p) || k->weights.size() == 1;
  if (auto* k = std::get_if<DirectSumKind>(&s.kind()))
    return interior(k->r) && is_smooth(*k->left) && is_smooth(*k->right);
  return false;
}

struct Counted {
  const Space& space;
  long count = 0;
  double operator()(const Vector& x) {
    ++count;
    return space.norm(x);
  }
};

struct StartOutcome {
  double value;
  Vector params;
};

// Derivative-free multistart descent. Each parameter block is kept at unit
// Euclidean length (objectives are scale invariant in each block); loose
// coordinates after the blocks are left alone.
class Descent {
 public:
  using Objective = std::function<double(const Vector&)>;

  Descent(int dim, std::vector<int> blocks, Objective f, const long* counter)
      : dim_(dim), blocks_(std::move(blocks)), f_(std::move(f)), counter_(counter) {}

  std::vector<StartOutcome> run(const std::vector<Vector>& starts, long max_evals,
                                std::mt19937_64& rng) const {
    std::vector<StartOutcome> out;
    const long per_start = std::max<long>(1, max_evals / static_cast<long>(starts.size()));
    for (const auto& s : starts) {
      if (*counter_ >= max_evals) break;
      out.push_back(local(s, *counter_ + per_start, rng));
    }
    return out;
  }

 private:
  void normalize(Vector& p) const {
    int off = 0;
    for (int b : blocks_) {
      const double n = p.segment(off, b).norm();
      if (n > 0) p.segment(off, b) /= n;
      off += b;
    }
  }

  StartOutcome local(Vector p, long stop_at, std::mt19937_64& rng) const {
    normalize(p);
    double best = f_(p);
    double step = 0.25;
    std::normal_distribution<double> g;
    while (step > 1e-10 && *counter_ < stop_at) {
      bool improved = false;
      for (int i = 0; i < dim_ && *counter_ < stop_at; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vector q = p;
          q[i] += sgn * step;
          normalize(q);
          const double v = f_(q);
          if (v < best) {
            best = v;
            p = q;
            improved = true;
            break;
          }
        }
      }
      // One random direction per sweep helps on non-smooth landscapes.
      Vector d(dim_);
      for (int i = 0; i < dim_; ++i) d[i] = g(rng);
      d /= d.norm();
      for (double sgn : {1.0, -1.0}) {
        Vector q = p + sgn * step * d;
        normalize(q);
        const double v = f_(q);
        if (v < best) {
          best = v;
          p = q;
          improved = true;
          break;
        }
      }
      if (!improved) step *= 0.5;
    }
    return {best, p};
  }

  int dim_;
  std::vector<int> blocks_;
  Objective f_;
  const long* counter_;
};

std::vector<Vector> random_starts(int count, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Vector> out;
  for (int s = 0; s < count; ++s) {
    Vector p(dim);
    for (int i = 0; i < dim; ++i) p[i] = g(rng);
    out.push_back(p);
  }
  return out;
}

// hi = best, lo = hi minus the spread of the best quarter of the starts.
CertifiedInterval summarize(std::vector<StartOutcome>& runs, long evals, const std::string& method) {
  if (runs.empty()) throw BudgetExhausted("search: budget too small for a single start");
  std::sort(runs.begin(), runs.end(),
            [](const StartOutcome& a, const StartOutcome& b) { return a.value < b.value; });
  const double best = std::max(0.0, runs.front().value);
  const std::size_t q = std::max<std::size_t>(1, runs.size() / 4) - 1;
  const double gap = (runs[q].value - runs.front().value) + 1e-9;
  return {std::max(0.0, best - gap), best, method, evals};
}

// y on the planar arc from x (theta = 0) to -x (theta = pi) through w with
// ||x - y|| = eps. Returns false if the arc degenerates.
bool retract(Counted& norm, const Vector& x, const Vector& w, double eps, Vector& y) {
  auto point = [&](double th, Vector& out) {
    const Vector u = std::cos(th) * x + std::sin(th) * w;
    const double nu = norm(u);
    if (!(nu > 0)) return false;
    out = u / nu;
    return true;
  };
  double lo = 0.0, hi = M_PI;
  Vector cur;
  y = -x;
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!point(mid, cur)) return false;
    if (norm(x - cur) < eps) {
      lo = mid;
    } else {
      hi = mid;
      y = cur;
    }
  }
  return std::abs(norm(x - y) - eps) <= 1e-9;
}

double hilbert_delta(double eps) { return 1.0 - std::sqrt(std::max(0.0, 1.0 - eps * eps / 4.0)); }

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 2.0)) throw InvalidInput("delta: eps must lie in [0, 2]");
}

}  // namespace

double phi_p(double p, double t) {
  if (!(p >= 1.0)) throw InvalidInput("phi_p: p must be >= 1");
  if (!(t >= 0.0)) throw InvalidInput("phi_p: t must be >= 0");
  if (t == 0.0) return 0.0;
  if (std::isinf(p)) return std::max(1.0, t) - 1.0;
  if (p == 1.0) return t;
  const double tp = std::pow(t, p);
  // Near 0 the direct form cancels; expm1(log1p(t^p)/p) keeps full accuracy.
  if (tp < 1e-3) return std::expm1(std::log1p(tp) / p);
  return std::pow(1.0 + tp, 1.0 / p) - 1.0;
}

Modulus Modulus::phi_p(double p) {
  if (!(p >= 1.0)) throw InvalidInput("phi_p: p must be >= 1");
  return Modulus(PhiPForm{p});
}

Modulus Modulus::identity() { return Modulus(IdentityForm{}); }

Modulus Modulus::table(std::vector<double> grid, std::vector<double> values, std::string provenance) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw InvalidInput("modulus table: need matching grid and values of length >= 2");
  if (grid.front() != 0.0) throw InvalidInput("modulus table: grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidInput("modulus table: grid must be increasing");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("modulus table: values must be finite and >= 0");
  TableForm t{std::move(grid), std::move(values), std::move(provenance), true};
  t.is_modulus = t.values.front() == 0.0;
  for (std::size_t i = 2; i < t.grid.size(); ++i)
    if (t.values[i] / t.grid[i] < t.values[i - 1] / t.grid[i - 1] - 1e-9) t.is_modulus = false;
  return Modulus(std::move(t));
}

double Modulus::operator()(double t) const {
  return std::visit(
      overloaded{
          [&](const PhiPForm& f) { return packlab::phi_p(f.p, t); },
          [&](const IdentityForm&) { return t; },
          [&](const TableForm& f) {
            const auto& g = f.grid;
            if (t >= g.back()) return f.values.back() * (t / g.back());
            const auto it = std::upper_bound(g.begin(), g.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - g.begin());
            const double a = (t - g[i - 1]) / (g[i] - g[i - 1]);
            return (1.0 - a) * f.values[i - 1] + a * f.values[i];
          },
          [&](const ComposedForm& f) { return (*f.outer)((*f.inner)(t)); },
      },
      form_);
}

bool Modulus::is_modulus() const {
  if (auto* t = std::get_if<TableForm>(&form_)) return t->is_modulus;
  if (auto* c = std::get_if<ComposedForm>(&form_)) return c->outer->is_modulus() && c->inner->is_modulus();
  return true;
}

std::string Modulus::label() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PhiPForm& f) { os << "phi_" << f.p; },
                 [&](const IdentityForm&) { os << "id"; },
                 [&](const TableForm& f) { os << "table[" << f.provenance << "]"; },
                 [&](const ComposedForm& f) { os << f.outer->label() << " o " << f.inner->label(); },
             },
             form_);
  return os.str();
}

Modulus compose(const Modulus& outer, const Modulus& inner) {
  if (!outer.is_modulus() || !inner.is_modulus())
    throw InvalidInput("compose: input is marked non-modulus");
  return Modulus(ComposedForm{std::make_shared<const Modulus>(outer), std::make_shared<const Modulus>(inner)});
}

AxiomReport check_modulus_axioms(const Modulus& phi, const std::vector<double>& grid, double tol) {
  AxiomReport r;
  if (grid.empty()) return r;
  r.phi1_ok = phi(0.0) == 0.0 && phi(grid.front()) <= tol;
  r.phi2_ok = true;
  r.positive = true;
  double prev = -kInf;
  for (double t : grid) {
    if (t <= 0.0) continue;
    const double v = phi(t);
    if (!(v > 0.0)) r.positive = false;
    const double ratio = v / t;
    if (ratio < prev - 1e-9) r.phi2_ok = false;
    prev = std::max(prev, ratio);
  }
  r.phi3_ok = true;
  for (double t : grid)
    for (int k = 1; k <= 9; ++k) {
      const double lam = 0.1 * k;
      if (phi(lam * t) > lam * phi(t) + 1e-9) r.phi3_ok = false;
    }
  return r;
}

CertifiedInterval delta(const Space& space, double eps, const EvalBudget& budget, std::uint64_t seed) {
  check_eps(eps);
  if (space.dim() < 2) throw InvalidInput("delta: dimension must be >= 2");
  if (eps == 0.0) return CertifiedInterval::exact(0.0, "exact");
  const int n = space.dim();
  Counted norm{space};
  auto f = [&](const Vector& p) {
    const Vector a = p.head(n), b = p.tail(n);
    const double c = a.dot(b);
    if (c * c >= (1.0 - 1e-12) * a.squaredNorm() * b.squaredNorm()) return kPenalty;
    const Vector x = a / norm(a);
    const Vector w = b / norm(b);
    Vector y;
    if (!retract(norm, x, w, eps, y)) return kPenalty;
    return 1.0 - 0.5 * norm(x + y);
  };
  Descent d(2 * n, {n, n}, f, &norm.count);
  std::mt19937_64 rng(derive_seed(seed, "delta"));
  auto runs = d.run(random_starts(budget.starts, 2 * n, rng), budget.max_evaluations, rng);
  auto out = summarize(runs, norm.count, "best-found");
  if (is_hilbert(space)) {
    out.lo = std::min(out.hi, hilbert_delta(eps) - 1e-12);
    out.method = "best-found/analytic-bound";
  }
  return out;
}

CertifiedInterval delta_local(const Space& space, const Vector& x0, double eps,
                              const EvalBudget& budget, std::uint64_t seed) {
  check_eps(eps);
  if (space.dim() < 2) throw InvalidInput("delta_local: dimension must be >= 2");
  if (std::abs(eval_norm(space, x0) - 1.0) > 1e-9) throw InvalidInput("delta_local: x0 must be a unit vector");
  if (eps == 0.0) return CertifiedInterval::exact(0.0, "exact");
  const int n = space.dim();
  Counted norm{space};
  auto f = [&](const Vector& b) {
    const double c = x0.dot(b);
    if (c * c >= (1.0 - 1e-12) * x0.squaredNorm() * b.squaredNorm()) return kPenalty;
    Vector y;
    if (!retract(norm, x0, b / norm(b), eps, y)) return kPenalty;
    return 1.0 - 0.5 * norm(x0 + y);
  };
  Descent d(n, {n}, f, &norm.count);
  std::mt19937_64 rng(derive_seed(seed, "delta_local"));
  auto runs = d.run(random_starts(budget.starts, n, rng), budget.max_evaluations, rng);
  auto out = summarize(runs, norm.count, "best-found");
  out.hi = std::min(out.hi, eps / 2.0);
  out.lo = std::min(out.lo, out.hi);
  return out;
}

TangentialResult tangential_search(const Space& space, double t, const EvalBudget& budget,
                                   std::uint64_t seed) {
  if (space.dim() < 2) throw InvalidInput("tangential: dimension must be >= 2");
  if (!(t >= 0.0)) throw InvalidInput("tangential: t must be >= 0");
  const int n = space.dim();
  const bool smooth = is_smooth(space);
  Counted norm{space};

  // Builds the unit pair (x, v) with x _|_ v from the parameters.
  auto pair = [&](const Vector& p, Vector& x, Vector& v) {
    const Vector a = p.head(n), b = p.segment(n, n);
    x = a / norm(a);
    double alpha;
    Vector f;
    if (smooth) {
      f = duality_functional(space, x, 1e-9);
      alpha = f.dot(b);
    } else {
      // alpha in [L, R] (one-sided slopes of lambda -> ||x + lambda b||)
      // makes b - alpha x orthogonal to x.
      const double h = 1e-7;
      const double r = (norm(x + h * b) - 1.0) / h;
      const double l = (1.0 - norm(x - h * b)) / h;
      const double s = std::clamp(p[2 * n], 0.0, 1.0);
      alpha = l + s * (r - l);
    }
    Vector w = b - alpha * x;
    // b nearly parallel to x leaves only rounding noise in w.
    if (!(w.norm() > 1e-3 * b.norm())) return false;
    if (smooth) w -= f.dot(w) * x;
    v = w / norm(w);
    return smooth || bj_orthogonal(space, x, v, 1e-6);
  };
  auto f = [&](const Vector& p) {
    Vector x, v;
    if (!pair(p, x, v)) return kPenalty;
    return norm(x + t * v) - 1.0;
  };
  const int dim = smooth ? 2 * n : 2 * n + 1;
  std::vector<int> blocks{n, n};
  Descent d(dim, blocks, f, &norm.count);
  std::mt19937_64 rng(derive_seed(seed, "tangential"));
  auto starts = random_starts(budget.starts, dim, rng);
  if (!smooth)
    for (auto& s : starts) s[2 * n] = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto runs = d.run(starts, budget.max_evaluations, rng);
  TangentialResult res;
  res.value = summarize(runs, norm.count, "best-found");
  if (!pair(runs.front().params, res.x, res.v)) throw VerificationFailure("tangential: no feasible witness found");
  if (t == 0.0) res.value = CertifiedInterval::exact(0.0, "exact");
  if (is_hilbert(space)) {
    res.value.lo = std::min(res.value.hi, std::sqrt(1.0 + t * t) - 1.0 - 1e-12);
    res.value.method = "best-found/analytic-bound";
  }
  return res;
}

CertifiedInterval tangential(const Space& space, double t, const EvalBudget& budget, std::uint64_t seed) {
  return tangential_search(space, t, budget, seed).value;
}

Modulus TangentialTable::modulus() const {
  std::vector<double> vals;
  for (const auto& v : values) vals.push_back(v.hi);
  return Modulus::table(grid, vals, "tangential");
}

TangentialTable tangential_table(const Space& space, const std::vector<double>& grid,
                                 const EvalBudget& budget, std::uint64_t seed,
                                 const std::string& provenance) {
  (void)provenance;
  TangentialTable out;
  out.grid = grid;
  std::vector<std::pair<Vector, Vector>> witnesses;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto r = tangential_search(space, grid[i], budget, derive_seed(seed, i));
    out.values.push_back(r.value);
    witnesses.emplace_back(r.x, r.v);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto& iv = out.values[i];
    if (grid[i] == 0.0) continue;
    for (const auto& [x, v] : witnesses) {
      const double val = std::max(0.0, space.norm(x + grid[i] * v) - 1.0);
      if (val < iv.hi) {
        iv.hi = val;
        iv.method += "/shared-witness";
      }
    }
    iv.lo = std::min(iv.lo, iv.hi);
  }
  return out;
}

CertifiedInterval t_x(const Space& space, const EvalBudget& budget, std::uint64_t seed, double tol) {
  long evals = 0;
  // +1: t in the set, -1: t outside, 0: undecided.
  auto classify = [&](double t, std::uint64_t tag) {
    EvalBudget b = budget;
    for (int attempt = 0; attempt < 2; ++attempt) {
      const auto d = delta(space, t, b, derive_seed(seed, tag + 1000 * attempt));
      evals += d.evaluations;
      if (d.hi <= 1.0 - t + 1e-12) return 1;
      if (d.lo > 1.0 - t + 1e-12) return -1;
      b.max_evaluations *= 2;
      b.starts *= 2;
    }
    return 0;
  };
  double a = 0.0, b = 1.0;
  const int top = classify(1.0, 0);
  if (top == 1) return {1.0, 1.0, "bisection", evals};
  if (top == 0) return {a, b, "bisection/straddle", evals};
  std::uint64_t tag = 1;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const int c = classify(m, tag++);
    if (c == 1) a = m;
    else if (c == -1) b = m;
    else return {a, b, "bisection/straddle", evals};
  }
  return {a, b, "bisection", evals};
}

bool InequalityReport::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const GridCheck& c) { return c.ok; });
}

InequalityReport nordlander_check(const Space& space, const std::vector<double>& grid,
                                  const EvalBudget& budget, std::uint64_t seed, double tol) {
  InequalityReport r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const auto d = delta(space, t, budget, derive_seed(seed, i));
    GridCheck c{t, d.lo, hilbert_delta(t), true, false};
    c.ok = c.lhs <= c.rhs + tol;
    r.checks.push_back(c);
  }
  return r;
}

VarphiDeltaReport varphi_delta_inequalities(const Space& space, const std::vector<double>& grid,
                                            const EvalBudget& budget, std::uint64_t seed) {
  VarphiDeltaReport rep;
  const auto phis = tangential_table(space, grid, budget, derive_seed(seed, "phi"));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (t >= 2.0) continue;
    // Item 4: small side uses delta.lo, large side phi.hi (the bound grows in phi).
    const double ph = phis.values[i].hi;
    const auto d4 = delta(space, t / (1.0 + ph), budget, derive_seed(seed, 4000 + i));
    GridCheck c4{t, d4.lo, ph / (1.0 + ph), true, false};
    c4.ok = c4.lhs <= c4.rhs + 1e-12;
    rep.item4.checks.push_back(c4);

    // Item 5: delta.hi shrinks the argument and raises the bound.
    const auto d5 = delta(space, t, budget, derive_seed(seed, 5000 + i));
    const double arg = t / 2.0 - 2.0 * d5.hi;
    GridCheck c5{t, 0.0, d5.hi, arg >= 0.0, true};
    if (c5.applicable) {
      c5.lhs = tangential(space, arg, budget, derive_seed(seed, 6000 + i)).lo;
      c5.ok = c5.lhs <= c5.rhs + 1e-12;
    }
    rep.item5.checks.push_back(c5);
  }
  return rep;
}

std::vector<double> uniform_grid(double top, int count) {
  if (count < 2) throw InvalidInput("grid: need at least two points");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[i] = top * i / (count - 1);
  return g;
}

}  // namespace packlab
