#include <doctest.h>

#include "packlab/moduli.hpp"

#include <cmath>

using namespace packlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

const EvalBudget kSmall{1'000'000, 16};

// Hanner-type closed forms for l_p^2. For p >= 2 the extremal pair is
// symmetric; for 1 < p < 2 solve |1-d+e/2|^p + |1-d-e/2|^p = 2 for d.
double hanner_delta(double p, double e) {
  if (p >= 2) return 1.0 - std::pow(1.0 - std::pow(e / 2.0, p), 1.0 / p);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double d = 0.5 * (lo + hi);
    const double g = std::pow(std::abs(1 - d + e / 2), p) + std::pow(std::abs(1 - d - e / 2), p);
    (g > 2.0 ? lo : hi) = d;
  }
  return 0.5 * (lo + hi);
}

// Brute force over the planar unit circle: in two dimensions the direction
// orthogonal to a smooth x is the kernel of the gradient.
double planar_tangential_oracle(double p, double t) {
  double best = kInf;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double th = M_PI * i / steps;
    const double c = std::cos(th), s = std::sin(th);
    const double nx = std::pow(std::pow(std::abs(c), p) + std::pow(std::abs(s), p), 1 / p);
    const double x0 = c / nx, x1 = s / nx;
    const double g0 = std::copysign(std::pow(std::abs(x0), p - 1), x0);
    const double g1 = std::copysign(std::pow(std::abs(x1), p - 1), x1);
    double v0 = -g1, v1 = g0;
    const double nv = std::pow(std::pow(std::abs(v0), p) + std::pow(std::abs(v1), p), 1 / p);
    v0 /= nv;
    v1 /= nv;
    for (double sg : {1.0, -1.0}) {
      const double a = x0 + sg * t * v0, b = x1 + sg * t * v1;
      best = std::min(best, std::pow(std::pow(std::abs(a), p) + std::pow(std::abs(b), p), 1 / p) - 1);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("phi_p closed form") {
  CHECK(phi_p(2, 1) == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
  CHECK(phi_p(1, 0.37) == 0.37);
  CHECK(phi_p(3, 0) == 0.0);
  CHECK(phi_p(4, 1) == doctest::Approx(std::pow(2.0, 0.25) - 1).epsilon(1e-15));
  CHECK(phi_p(kInf, 0.5) == 0.0);
  CHECK_THROWS_AS(phi_p(0.5, 1), InvalidInput);
}

TEST_CASE("modulus forms, composition and axioms") {
  const Modulus p2 = Modulus::phi_p(2);
  const Modulus c = compose(p2, p2);
  const double inner = std::sqrt(2.0) - 1;
  CHECK(c(1.0) == doctest::Approx(std::sqrt(1 + inner * inner) - 1).epsilon(1e-14));
  CHECK(c(1.0) == doctest::Approx(0.082392).epsilon(1e-5));
  const Modulus id = compose(Modulus::identity(), p2);
  for (double t : {0.0, 0.3, 1.0, 1.7}) CHECK(id(t) == p2(t));

  const auto grid = uniform_grid(2.0, 200);
  CHECK(check_modulus_axioms(c, grid).all());
  for (double p : {1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    const auto r = check_modulus_axioms(Modulus::phi_p(p), grid);
    CHECK(r.all());
    CHECK(r.positive);
  }

  std::vector<double> sq;
  for (double t : grid) sq.push_back(t * t);
  const Modulus tsq = Modulus::table(grid, sq, "t^2");
  CHECK(tsq.is_modulus());
  CHECK(check_modulus_axioms(tsq, grid).all());

  // sqrt(t) has decreasing phi(t)/t: flagged, and composition refuses it.
  std::vector<double> rt;
  for (double t : grid) rt.push_back(std::sqrt(t));
  const Modulus bad = Modulus::table(grid, rt, "sqrt");
  CHECK_FALSE(bad.is_modulus());
  CHECK_FALSE(check_modulus_axioms(bad, grid).phi2_ok);
  CHECK_THROWS_AS(compose(p2, bad), InvalidInput);
  CHECK_THROWS_AS(Modulus::table({0.1, 0.2}, {0, 0}, "x"), InvalidInput);
}

TEST_CASE("delta matches Hilbert and Hanner closed forms") {
  for (double e : {0.5, 1.0, 1.5}) {
    const auto d = delta(Space::lp(2, 2), e, kSmall, 1);
    CHECK(d.hi == doctest::Approx(1 - std::sqrt(1 - e * e / 4)).epsilon(1e-9));
    CHECK(d.lo <= d.hi);
  }
  for (double p : {1.5, 3.0, 4.0}) {
    CAPTURE(p);
    const auto d = delta(Space::lp(p, 2), 1.0, kSmall, 2);
    CHECK(std::abs(d.hi - hanner_delta(p, 1.0)) < 1e-6);
  }
  CHECK(delta(Space::lp(1, 2), 1.0, kSmall, 3).hi <= 1e-12);
  const auto z = delta(Space::lp(3, 3), 0.0, kSmall, 3);
  CHECK((z.lo == 0.0 && z.hi == 0.0));
  CHECK_THROWS_AS(delta(Space::lp(2, 2), 2.5, kSmall, 1), InvalidInput);
}

TEST_CASE("local modulus") {
  const Space l2 = Space::lp(2, 2);
  const auto loc = delta_local(l2, vec({1, 0}), 1.0, kSmall, 4);
  const auto glob = delta(l2, 1.0, kSmall, 4);
  CHECK(std::abs(loc.hi - glob.hi) < 1e-4);
  CHECK(delta_local(Space::lp(1, 2), vec({1, 0}), 0.5, kSmall, 4).hi <= 1e-12);
  const auto z = delta_local(l2, vec({0, 1}), 0.0, kSmall, 4);
  CHECK(z.hi == 0.0);
  CHECK(delta_local(Space::lp(4, 2), vec({1, 0}), 1.8, kSmall, 5).hi <= 0.9);
  CHECK_THROWS_AS(delta_local(l2, vec({2, 0}), 1.0, kSmall, 4), InvalidInput);
}

TEST_CASE("tangential modulus golden values and oracles") {
  for (int n : {2, 3, 4}) {
    const auto f = tangential(Space::lp(2, n), 1.0, kSmall, 7);
    CHECK(std::abs(f.hi - (std::sqrt(2.0) - 1)) < 1e-9);
  }
  CHECK(tangential(Space::lp(1, 2), 1.0, kSmall, 7).hi <= 1e-12);
  CHECK(tangential(Space::lp(kInf, 2), 1.0, kSmall, 7).hi <= 1e-12);
  CHECK(tangential(Space::lp(3, 3), 0.0, kSmall, 7).hi == 0.0);
  for (double p : {1.5, 3.0}) {
    CAPTURE(p);
    const double oracle = planar_tangential_oracle(p, 0.8);
    CHECK(std::abs(tangential(Space::lp(p, 2), 0.8, kSmall, 8).hi - oracle) < 1e-6);
  }
  CHECK_THROWS_AS(tangential(Space::lp(2, 1), 1.0, kSmall, 7), InvalidInput);
}

TEST_CASE("tangential tables satisfy the modulus properties") {
  const auto grid = uniform_grid(2.0, 11);
  for (double p : {1.0, 1.5, 3.0}) {
    CAPTURE(p);
    const auto tab = tangential_table(Space::lp(p, 2), grid, kSmall, 9);
    const Modulus m = tab.modulus();
    const auto r = check_modulus_axioms(m, grid);
    CHECK(r.phi1_ok);
    CHECK(r.phi2_ok);
    CHECK(r.phi3_ok);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double w = tab.values[i].width() + tab.values[i - 1].width();
      CHECK(std::abs(tab.values[i].hi - tab.values[i - 1].hi) <= grid[i] - grid[i - 1] + 2 * w + 1e-12);
    }
    // Positivity equivalence at grid resolution.
    const bool phi_pos = tab.values[5].hi > 1e-9;
    const bool delta_pos = delta(Space::lp(p, 2), grid[5], kSmall, 10).hi > 1e-9;
    CHECK(phi_pos == delta_pos);
    CHECK(phi_pos == (p > 1.0));
  }
}

TEST_CASE("subspace monotonicity across dimensions") {
  for (double p : {1.5, 3.0}) {
    const auto a = tangential(Space::lp(p, 2), 1.0, kSmall, 11);
    const auto b = tangential(Space::lp(p, 4), 1.0, EvalBudget{4'000'000, 32}, 11);
    CHECK(a.hi >= b.lo - (a.width() + b.width()) - 1e-9);
  }
}

TEST_CASE("polytope perturbation smoke test") {
  std::vector<Vector> oct, pert;
  for (int i = 0; i < 8; ++i) {
    const double a = 2 * M_PI * i / 8;
    oct.push_back(vec({std::cos(a), std::sin(a)}));
  }
  for (int i = 0; i < 4; ++i) {
    const double s = 1.0 + 0.01 * i / 3.0;
    pert.push_back(s * oct[i]);
  }
  for (int i = 0; i < 4; ++i) pert.push_back(-pert[i]);
  const auto a = tangential(Space::polytope(oct), 1.0, kSmall, 12);
  const auto b = tangential(Space::polytope(pert), 1.0, kSmall, 12);
  CHECK(std::abs(a.hi - b.hi) <= 0.1);
}

TEST_CASE("t_X brackets and lower bound") {
  const EvalBudget b{400'000, 8};
  const auto l2 = t_x(Space::lp(2, 2), b, 1);
  CHECK(l2.contains(2 / std::sqrt(5.0), 1e-5));
  const auto l1 = t_x(Space::lp(1, 2), b, 1);
  CHECK(l1.contains(1.0));
  const auto l3 = t_x(Space::lp(3, 2), b, 1);
  CHECK(l3.lo >= 2 / std::sqrt(5.0) - 1e-5);
  // Oracle: the crossing of the Hanner curve with 1 - t.
  double lo = 0, hi = 1;
  for (int i = 0; i < 100; ++i) {
    const double m = 0.5 * (lo + hi);
    (hanner_delta(3, m) <= 1 - m ? lo : hi) = m;
  }
  CHECK(l3.contains(lo, 1e-4));
}

TEST_CASE("Nordlander inequality") {
  const auto grid = uniform_grid(2.0, 6);
  const auto h = nordlander_check(Space::lp(2, 2), grid, kSmall, 2);
  CHECK(h.all_ok());
  for (const auto& c : h.checks) CHECK(std::abs(c.lhs - c.rhs) < 1e-4);
  const auto l4 = nordlander_check(Space::lp(4, 2), {0.0, 1.0}, kSmall, 2);
  CHECK(l4.all_ok());
  CHECK(l4.checks[0].lhs == 0.0);
  CHECK(l4.checks[1].lhs < l4.checks[1].rhs - 1e-3);
}

TEST_CASE("varphi-delta inequalities") {
  const auto grid = uniform_grid(1.9, 6);
  for (double p : {1.0, 2.0, 3.0}) {
    CAPTURE(p);
    const auto r = varphi_delta_inequalities(Space::lp(p, 2), grid, kSmall, 3);
    CHECK(r.all_ok());
  }
  // Hilbert spot value at t = 1: delta(1/sqrt 2) against (sqrt2-1)/sqrt2.
  const double s = 1 / std::sqrt(2.0);
  CHECK(1 - std::sqrt(1 - s * s / 4) == doctest::Approx(0.0645).epsilon(1e-2));
}
