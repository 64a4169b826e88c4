#include "packlab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace packlab {

namespace {

struct Config {
  std::vector<Vector> pts;
  double sep = 0.0;
  std::string method;
};

// Pulls a point back into the closed ball.
void project(const Space& s, Vector& x) {
  const double n = s.norm(x);
  if (n > 1.0) {
    x /= n;
    while (s.norm(x) > 1.0) x *= 1.0 - 1e-16;
  }
}

// Nearest neighbour of every point; ties go to the lowest index.
std::vector<std::pair<double, int>> nearest(const Space& s, const std::vector<Vector>& p, long& evals) {
  const int m = static_cast<int>(p.size());
  std::vector<std::pair<double, int>> nn(m, {kInf, -1});
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double d = s.norm(p[i] - p[j]);
      ++evals;
      if (d < nn[i].first) nn[i] = {d, j};
      if (d < nn[j].first) nn[j] = {d, i};
    }
  return nn;
}

double min_of(const std::vector<std::pair<double, int>>& nn) {
  double m = kInf;
  for (const auto& e : nn) m = std::min(m, e.first);
  return m;
}

// Repulsion ascent: points close to the current minimum move away from their
// nearest neighbour; steps are relative to the Euclidean scale of the ball.
void ascend(const Space& s, Config& c, long max_evals, long& evals, long& iterations) {
  if (c.pts.size() < 2) return;
  double scale = 0.0;
  for (const auto& x : c.pts) scale = std::max(scale, x.norm());
  auto nn = nearest(s, c.pts, evals);
  double best = min_of(nn);
  double step = 0.125;
  while (step > 1e-9 && evals < max_evals) {
    ++iterations;
    std::vector<Vector> trial = c.pts;
    for (std::size_t i = 0; i < trial.size(); ++i) {
      if (nn[i].first > best * (1.0 + 4.0 * step)) continue;
      const Vector d = c.pts[i] - c.pts[static_cast<std::size_t>(nn[i].second)];
      const double dn = d.norm();
      if (dn > 0) trial[i] += (step * scale / dn) * d;
      project(s, trial[i]);
    }
    auto tnn = nearest(s, trial, evals);
    const double tbest = min_of(tnn);
    if (tbest > best) {
      c.pts = std::move(trial);
      nn = std::move(tnn);
      best = tbest;
      step = std::min(0.125, step * 1.5);
    } else {
      step *= 0.5;
    }
  }
  c.sep = best;
}

Vector unit(const Space& s, const Vector& z) {
  Vector x = z / s.norm(z);
  project(s, x);
  return x;
}

}  // namespace

double verify_separation(const Space& space, const std::vector<Vector>& points) {
  if (points.size() < 2) throw InvalidInput("verify_separation: need at least two points");
  double best = kInf;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, eval_norm(space, points[i] - points[j]));
  return best;
}

DispersionResult max_min_separation(const Space& space, int m, const EvalBudget& budget,
                                    std::uint64_t seed, int max_points) {
  if (m < 2) throw InvalidInput("dispersion: m must be >= 2");
  if (m > max_points) throw InvalidInput("dispersion: m exceeds the configured maximum");
  const int n = space.dim();
  std::mt19937_64 rng(derive_seed(seed, "dispersion"));
  std::vector<Config> starts;

  // +/- unit coordinate vectors, then the +e_i prefix alone.
  if (m <= 2 * n) {
    Config c{{}, 0.0, "signed-basis"};
    for (int i = 0; i < m; ++i) {
      Vector e = Vector::Zero(n);
      e[i / 2] = (i % 2 == 0) ? 1.0 : -1.0;
      c.pts.push_back(unit(space, e));
    }
    starts.push_back(std::move(c));
  }
  if (m <= n) {
    Config c{{}, 0.0, "basis"};
    for (int i = 0; i < m; ++i) c.pts.push_back(unit(space, Vector::Unit(n, i)));
    starts.push_back(std::move(c));
  }
  // Farthest-point spreads from a sphere sample, with random first points.
  const int pool_size = std::min(20000, std::max(200, 40 * m));
  const auto pool = sphere_sample(space, pool_size, derive_seed(seed, "pool"));
  const int spreads = std::max(1, std::min(budget.starts, 6));
  for (int s = 0; s < spreads; ++s) {
    Config c{{}, 0.0, "spread"};
    std::vector<double> dist(pool.size(), kInf);
    std::size_t cur = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
    for (int k = 0; k < m; ++k) {
      c.pts.push_back(pool[cur]);
      std::size_t arg = 0;
      double far = -1.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        dist[i] = std::min(dist[i], space.norm(pool[i] - pool[cur]));
        if (dist[i] > far) {
          far = dist[i];
          arg = i;
        }
      }
      cur = arg;
    }
    starts.push_back(std::move(c));
  }

  long evals = 0, iterations = 0;
  const long per = std::max<long>(1, budget.max_evaluations / static_cast<long>(starts.size()));
  Config best;
  best.sep = -1.0;
  for (auto& c : starts) {
    ascend(space, c, evals + per, evals, iterations);
    if (c.sep > best.sep) best = c;
  }
  DispersionResult r;
  r.points = best.pts;
  r.min_separation = verify_separation(space, r.points);
  r.method = best.method + "+repulsion";
  r.iterations = iterations;
  return r;
}

std::vector<DispersionResult> dispersion_sweep(const Space& space, std::vector<int> ms,
                                               const EvalBudget& budget, std::uint64_t seed) {
  std::sort(ms.begin(), ms.end());
  std::vector<DispersionResult> out;
  for (int m : ms) out.push_back(max_min_separation(space, m, budget, derive_seed(seed, m)));
  for (std::size_t k = out.size(); k-- > 1;) {
    auto& small = out[k - 1];
    const auto& big = out[k];
    if (small.min_separation >= big.min_separation) continue;
    small.points.assign(big.points.begin(), big.points.begin() + ms[k - 1]);
    small.min_separation = verify_separation(space, small.points);
    small.method = "subset-of-" + std::to_string(ms[k]);
  }
  return out;
}

}  // namespace packlab
