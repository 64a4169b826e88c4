#include "packlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace packlab {

namespace {

double default_mesh(int n) {
  switch (n) {
    case 1:
    case 2: return 1.0 / 64;
    case 3: return 1.0 / 24;
    case 4: return 1.0 / 10;
    default: return 1.0 / 6;
  }
}

// Norm radius of a cell of width w (basis coordinates): the largest norm of
// a half-diagonal, maximized over sign patterns.
double cell_radius(const Space& space, const Matrix& b, double w) {
  const int n = static_cast<int>(b.cols());
  double best = 0.0;
  for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
    Vector v = 0.5 * w * b.col(0);
    for (int i = 1; i < n; ++i) v += ((mask >> (i - 1)) & 1 ? -0.5 : 0.5) * w * b.col(i);
    best = std::max(best, space.norm(v));
  }
  return best;
}

struct Cell {
  Vector coords;
  int level;
  double dist;
  double upper;
  bool operator<(const Cell& o) const { return upper < o.upper; }
};

// Branch and bound over the unit cube of basis coordinates for a periodic,
// 1-Lipschitz distance function.
CertifiedInterval cell_bnb(const Space& space, const Matrix& basis,
                           const std::function<double(const Vector&)>& dist,
                           const CoveringOptions& opt, double lo_seed, Vector* argmax) {
  const int n = static_cast<int>(basis.cols());
  const double mesh = opt.mesh > 0 ? opt.mesh : default_mesh(n);
  const long per_axis = std::max(1L, static_cast<long>(std::ceil(1.0 / mesh - 1e-12)));
  const double w0 = 1.0 / static_cast<double>(per_axis);
  const double rho0 = cell_radius(space, basis, w0);
  auto rho = [&](int level) { return std::ldexp(rho0, -level); };

  double lo = lo_seed;
  Vector best_x;
  long evals = 0;
  std::priority_queue<Cell> queue;
  auto eval = [&](Vector c, int level) {
    const Vector x = basis * c;
    const double d = dist(x);
    ++evals;
    if (d > lo || best_x.size() == 0) {
      if (d > lo) lo = d;
      best_x = x;
    }
    queue.push(Cell{std::move(c), level, d, d + rho(level)});
  };

  long total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  for (long k = 0; k < total; ++k) {
    long r = k;
    Vector c(n);
    for (int i = 0; i < n; ++i) {
      c[i] = (static_cast<double>(r % per_axis) + 0.5) * w0;
      r /= per_axis;
    }
    eval(std::move(c), 0);
  }
  std::string method = "lipschitz-grid";
  while (!queue.empty() && queue.top().upper - lo > opt.tol) {
    if (evals >= opt.max_cells) {
      method = "lipschitz-grid/budget";
      break;
    }
    Cell top = queue.top();
    queue.pop();
    const double q = std::ldexp(w0, -(top.level + 2));  // quarter width
    for (long mask = 0; mask < (1L << n); ++mask) {
      Vector c = top.coords;
      for (int i = 0; i < n; ++i) c[i] += ((mask >> i) & 1) ? q : -q;
      eval(std::move(c), top.level + 1);
    }
  }
  double hi = queue.empty() ? lo : queue.top().upper;
  hi = std::max(hi * (1.0 + 1e-12), lo);
  if (argmax) *argmax = best_x;
  return {lo, hi, method, evals};
}

}  // namespace

NearestOracle::NearestOracle(const Space& space, const Lattice& lattice) : space_(&space) {
  if (!lattice.full_rank()) throw InvalidInput("nearest oracle: lattice must have full rank");
  if (lattice.ambient_dim() != space.dim()) throw InvalidInput("lattice/space dimension mismatch");
  reduced_ = lattice.lll_reduced();
  inverse_ = reduced_.basis().inverse();
  // After centring, ||x'||_2 <= beta; the closest point lies within
  // (1 + c2/c1) beta of the origin.
  double beta = 0.0;
  for (int i = 0; i < reduced_.rank(); ++i) beta += 0.5 * reduced_.basis().col(i).norm();
  const double radius = (1.0 + space.c2() / space.c1()) * beta * (1.0 + 1e-9);
  enumerate_ball(reduced_, Vector::Zero(reduced_.ambient_dim()), radius,
                 [&](const Coeffs&, const Vector& v, double) {
                   cands_.push_back(v);
                   return radius;
                 });
  std::sort(cands_.begin(), cands_.end(),
            [](const Vector& a, const Vector& b) { return a.squaredNorm() < b.squaredNorm(); });
  for (const auto& c : cands_) cand_norm2_.push_back(c.norm());
}

double NearestOracle::dist(const Vector& x) const {
  const Vector c = inverse_ * x;
  Vector r(c.size());
  for (int i = 0; i < c.size(); ++i) r[i] = std::round(c[i]);
  const Vector xr = x - reduced_.basis() * r;
  const double xn = xr.norm();
  const double c1 = space_->c1();
  double best = kInf;
  for (std::size_t i = 0; i < cands_.size(); ++i) {
    // ||xr - v|| >= c1 (|v|_2 - |xr|_2); candidates are sorted by |v|_2.
    if (c1 * (cand_norm2_[i] - xn) > best) break;
    best = std::min(best, space_->norm(xr - cands_[i]));
  }
  return best;
}

std::pair<Vector, double> shortest_vector(const Space& space, const Lattice& lat) {
  if (lat.ambient_dim() != space.dim()) throw InvalidInput("shortest_vector: dimension mismatch");
  if (lat.rank() == 0) throw InvalidInput("shortest_vector: empty lattice");
  const Lattice red = lat.lll_reduced();
  Vector best_v = red.basis_vector(0);
  double best = space.norm(best_v);
  for (int i = 1; i < red.rank(); ++i) {
    const double d = space.norm(red.basis_vector(i));
    if (d < best) {
      best = d;
      best_v = red.basis_vector(i);
    }
  }
  const double c1 = space.c1();
  enumerate_ball(red, Vector::Zero(red.ambient_dim()), best / c1 * (1 + 1e-9),
                 [&](const Coeffs&, const Vector& v, double d2) {
                   if (d2 > 0.0) {
                     const double d = space.norm(v);
                     if (d < best) {
                       best = d;
                       best_v = v;
                     }
                   }
                   return best / c1 * (1 + 1e-9);
                 });
  return {best_v, best};
}

double dist_to_lattice(const Space& space, const Lattice& lat, const Vector& x) {
  if (x.size() != space.dim() || lat.ambient_dim() != space.dim())
    throw InvalidInput("dist_to_lattice: dimension mismatch");
  if (lat.rank() == 0) return space.norm(x);
  const Lattice red = lat.lll_reduced();
  // Babai rounding gives the starting radius.
  const auto proj = red.project(x);
  Coeffs k(red.rank());
  for (int i = 0; i < red.rank(); ++i) k[i] = std::lround(proj.coords[i]);
  double best = space.norm(x - red.point(k));
  const double c1 = space.c1();
  enumerate_ball(red, x, best / c1 * (1 + 1e-9), [&](const Coeffs&, const Vector& v, double) {
    best = std::min(best, space.norm(x - v));
    return best / c1 * (1 + 1e-9);
  });
  return best;
}

CertifiedInterval covering_radius(const Space& space, const Lattice& lat, const CoveringOptions& opt) {
  if (!lat.full_rank()) throw InvalidInput("covering_radius: lattice must have full rank (covering radius is infinite)");
  if (opt.mesh < 0) throw InvalidInput("covering_radius: mesh must be positive");
  const NearestOracle oracle(space, lat);
  // v/2 for a shortest v is at distance exactly lambda_1 / 2.
  const auto sv = shortest_vector(space, lat);
  return cell_bnb(space, oracle.reduced().basis(), [&](const Vector& x) { return oracle.dist(x); },
                  opt, 0.5 * sv.second, nullptr);
}

CertifiedInterval periodic_covering_radius(const Space& space, const Lattice& lat,
                                           const std::vector<Vector>& offsets,
                                           const CoveringOptions& opt, Vector* argmax) {
  if (!lat.full_rank()) throw InvalidInput("covering_radius: lattice must have full rank");
  const NearestOracle oracle(space, lat);
  auto dist = [&](const Vector& x) {
    double d = kInf;
    for (const auto& o : offsets) d = std::min(d, oracle.dist(x - o));
    return d;
  };
  return cell_bnb(space, oracle.reduced().basis(), dist, opt, 0.0, argmax);
}

GammaStarEstimate gamma_star_of_lattice(const Space& space, const Lattice& lat, double gamma_tol,
                                        double mesh, long max_cells) {
  const auto sv = shortest_vector(space, lat);
  const double l1 = sv.second;
  CoveringOptions opt{mesh, gamma_tol * l1 / 2.0, max_cells};
  GammaStarEstimate e;
  e.packing_sep = CertifiedInterval::exact(l1, "enumeration");
  e.covering = covering_radius(space, lat, opt);
  e.gamma_star = {2.0 * e.covering.lo / l1, 2.0 * e.covering.hi / l1, e.covering.method,
                  e.covering.evaluations};
  e.lattice = lat;
  return e;
}

namespace {

// Annealing objective: the upper endpoint of a coarse, capped certificate.
// Being an upper bound, it cannot be gamed by lattices whose deep holes fall
// between grid points.
double coarse_gamma_hi(const Space& space, const Lattice& lat, double l1) {
  const int n = lat.rank();
  const double mesh = n <= 2 ? 1.0 / 16 : n == 3 ? 1.0 / 6 : 1.0 / 4;
  const NearestOracle oracle(space, lat);
  CoveringOptions opt{mesh, 0.004 * l1 / 2.0, 6000};
  const auto c = cell_bnb(space, oracle.reduced().basis(),
                          [&](const Vector& x) { return oracle.dist(x); }, opt, 0.5 * l1, nullptr);
  return 2.0 * c.hi / l1;
}

}  // namespace

GammaStarEstimate optimize_lattice(const Space& space, int n, std::uint64_t seed, const OptimizeOptions& opt) {
  if (n != space.dim()) throw InvalidInput("optimize_lattice: n must equal the space dimension");
  if (n > 4) throw InvalidInput("optimize_lattice: dimension cap is 4");
  if (n < 1) throw InvalidInput("optimize_lattice: dimension must be positive");
  std::mt19937_64 rng(derive_seed(seed, "optimize"));
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto normalized = [&](const Lattice& lat, double& l1) {
    const Lattice red = lat.lll_reduced();
    l1 = shortest_vector(space, red).second;
    return red.scaled(2.0 / l1);
  };

  Matrix b0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b0(i, j) = g(rng);
  double l1 = 0.0;
  Lattice cur = normalized(Lattice(b0), l1);
  double f = coarse_gamma_hi(space, cur, 2.0);

  std::vector<std::pair<double, Lattice>> top{{f, cur}};
  auto remember = [&](double v, const Lattice& lat) {
    for (const auto& e : top)
      if (std::abs(e.first - v) < 1e-9) return;
    top.emplace_back(v, lat);
    std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (static_cast<int>(top.size()) > opt.certify_top) top.pop_back();
  };

  // Geometric cooling; on stagnation the chain restarts from the best basis
  // with half the proposal scale, down to 1/8 of the initial 0.05 lambda_1.
  double temp = 0.01;
  double scale = 0.05;
  long last_improve = 0;
  double best = f;
  Lattice best_lat = cur;
  for (long k = 1; k <= opt.proposals; ++k) {
    Matrix b = cur.basis();
    const int j = static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
    for (int i = 0; i < n; ++i) b(i, j) += scale * 2.0 * g(rng);
    Lattice cand;
    double cl1 = 0.0;
    try {
      cand = normalized(Lattice(b), cl1);
    } catch (const InvalidInput&) {
      continue;
    }
    const double fc = coarse_gamma_hi(space, cand, 2.0);
    if (fc <= f || u(rng) < std::exp(-(fc - f) / temp)) {
      cur = cand;
      f = fc;
    }
    if (fc < best - 1e-9) {
      best = fc;
      best_lat = cand;
      last_improve = k;
    }
    remember(fc, cand);
    if (k % 20 == 0) temp *= 0.95;
    if (k - last_improve > opt.stagnation) {
      if (scale < 0.05 / 8 + 1e-12) break;
      scale *= 0.5;
      cur = best_lat;
      f = best;
      last_improve = k;
    }
  }

  GammaStarEstimate out;
  bool have = false;
  for (const auto& [v, lat] : top) {
    (void)v;
    auto e = gamma_star_of_lattice(space, lat, opt.gamma_tol);
    if (!have || e.gamma_star.hi < out.gamma_star.hi) {
      out = e;
      have = true;
    }
  }
  out.gamma_star.method += "/annealing";
  return out;
}

double voronoi_gauge(const Lattice& lat, const Vector& x) {
  const Space s = Space::voronoi(lat);
  return eval_norm(s, x);
}

SaturationResult saturate_packing(const Space& space, const Lattice& base, int samples, std::uint64_t seed) {
  if (!base.full_rank()) throw InvalidInput("saturate_packing: base lattice must have full rank");
  if (samples < 1) throw InvalidInput("saturate_packing: samples must be positive");
  const auto sv = shortest_vector(space, base);
  if (sv.second < 2.0) throw InvalidInput("saturate_packing: base lattice is not 2-separated");
  const NearestOracle oracle(space, base);
  const Matrix& b = oracle.reduced().basis();
  const int n = static_cast<int>(b.cols());

  // Pool: a dyadic grid of the fundamental domain plus uniform samples.
  std::vector<Vector> pool;
  int per_axis = 1;
  while (std::pow(2.0 * per_axis, n) <= samples / 2.0) per_axis *= 2;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  for (long k = 0; k < total; ++k) {
    long r = k;
    Vector c(n);
    for (int i = 0; i < n; ++i) {
      c[i] = static_cast<double>(r % per_axis) / per_axis;
      r /= per_axis;
    }
    pool.push_back(b * c);
  }
  std::mt19937_64 rng(derive_seed(seed, "saturate"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (static_cast<int>(pool.size()) < samples) {
    Vector c(n);
    for (int i = 0; i < n; ++i) c[i] = u(rng);
    pool.push_back(b * c);
  }
  std::shuffle(pool.begin(), pool.end(), rng);

  SaturationResult res;
  res.centers.push_back(Vector::Zero(n));
  std::vector<double> d(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) d[i] = oracle.dist(pool[i]);
  auto insert = [&](const Vector& c) {
    res.centers.push_back(c);
    ++res.added;
    for (std::size_t i = 0; i < pool.size(); ++i) d[i] = std::min(d[i], oracle.dist(pool[i] - c));
  };
  CoveringOptions opt{0.0, 1e-3, 400000};
  for (int round = 0; round < 64; ++round) {
    // Farthest-first: insert the pool point farthest from the current set
    // while it is still at distance >= 2 (first in shuffled order on ties).
    while (true) {
      std::size_t arg = 0;
      for (std::size_t i = 1; i < pool.size(); ++i)
        if (d[i] > d[arg]) arg = i;
      if (pool.empty() || !(d[arg] >= 2.0)) break;
      insert(pool[arg]);
    }
    Vector far;
    res.r = periodic_covering_radius(space, base, res.centers, opt, &far);
    if (res.r.lo < 2.0) break;
    // The certificate found a point the pool missed; it joins the pool.
    pool.push_back(far);
    d.push_back(kInf);
    d.back() = res.r.lo;
  }
  return res;
}

}  // namespace packlab
