#include <doctest.h>

#include "packlab/io.hpp"
#include "packlab/norms.hpp"

#include <cmath>
#include <random>

using namespace packlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<Vector> regular_polygon(int k, double phase = 0.0) {
  std::vector<Vector> out;
  for (int i = 0; i < k; ++i) {
    const double a = phase + 2.0 * M_PI * i / k;
    out.push_back(vec({std::cos(a), std::sin(a)}));
  }
  return out;
}

std::vector<Space> all_kinds() {
  return {
      Space::lp(2, 3),
      Space::lp(1, 3),
      Space::lp(kInf, 3),
      Space::lp(3.5, 3),
      Space::weighted_lp(3, vec({1.0, 2.0, 0.5})),
      Space::polytope(regular_polygon(8)),
      Space::direct_sum(Space::lp(1, 1), Space::lp(3, 2), 2),
      Space::voronoi(Lattice::from_rows({{2, 0}, {1, std::sqrt(3.0)}})),
  };
}

}  // namespace

TEST_CASE("eval_norm on closed-form inputs") {
  CHECK(eval_norm(Space::lp(2, 2), vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(eval_norm(Space::lp(1, 3), vec({1, -1, 1})) == 3.0);
  CHECK(eval_norm(Space::direct_sum(Space::lp(1, 1), Space::lp(1, 1), 2), vec({1, 1})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eval_norm(Space::lp(kInf, 3), vec({1, -7, 2})) == 7.0);
  CHECK(eval_norm(Space::lp(2, 2), Vector::Zero(2)) == 0.0);
  CHECK_THROWS_AS(eval_norm(Space::lp(2, 2), vec({1, 2, 3})), InvalidInput);
  CHECK_THROWS_AS(Space::polytope({vec({1, 0}), vec({0, 1}), vec({-1, 0})}), InvalidInput);
}

TEST_CASE("weighted lp agrees with a rescaled coordinate sum") {
  const Space s = Space::weighted_lp(3, vec({1.0, 8.0}));
  const Vector x = vec({0.3, -0.7});
  const double oracle = std::cbrt(std::pow(0.3, 3) + 8.0 * std::pow(0.7, 3));
  CHECK(eval_norm(s, x) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("polytope gauge of the square and the octagon") {
  const Space sq = Space::polytope({vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})});
  CHECK(eval_norm(sq, vec({0.5, -0.25})) == doctest::Approx(0.5));
  // Regular octagon with unit circumradius: inradius is cos(pi/8).
  const Space oct = Space::polytope(regular_polygon(8, M_PI / 8));
  CHECK(eval_norm(oct, vec({1, 0})) == doctest::Approx(1.0 / std::cos(M_PI / 8)));
  // A redundant interior point is discarded.
  const Space sq2 = Space::polytope({vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1}),
                                     vec({0.5, 0}), vec({-0.5, 0})});
  CHECK(eval_norm(sq2, vec({0.5, -0.25})) == doctest::Approx(0.5));
}

TEST_CASE("voronoi gauge of the hexagonal lattice") {
  const Space s = Space::voronoi(Lattice::from_rows({{2, 0}, {1, std::sqrt(3.0)}}));
  const auto& k = std::get<VoronoiKind>(s.kind());
  CHECK(k.relevant.size() == 3);
  // Cell is a hexagon of inradius 1; lattice vectors have gauge 2.
  CHECK(eval_norm(s, vec({2, 0})) == doctest::Approx(2.0));
  CHECK(eval_norm(s, vec({1, std::sqrt(3.0)})) == doctest::Approx(2.0));
  CHECK(eval_norm(s, vec({0, 2.0 / std::sqrt(3.0)})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dual_eval(s, vec({1, 0})), Unsupported);
  // Z^2 gives the square cell, i.e. twice the sup norm.
  const Space z = Space::voronoi(Lattice::scaled_identity(2, 1.0));
  CHECK(eval_norm(z, vec({0.3, -0.4})) == doctest::Approx(0.8));
}

TEST_CASE("norm axioms and exact symmetry on random samples") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (const auto& s : all_kinds()) {
    CAPTURE(s.label());
    for (int trial = 0; trial < 10000; ++trial) {
      Vector x(s.dim()), y(s.dim());
      for (int i = 0; i < s.dim(); ++i) {
        x[i] = g(rng);
        y[i] = g(rng);
      }
      const double a = g(rng);
      const double nx = eval_norm(s, x), ny = eval_norm(s, y);
      REQUIRE(eval_norm(s, x + y) <= nx + ny + 1e-12 * (1 + nx + ny));
      REQUIRE(std::abs(eval_norm(s, a * x) - std::abs(a) * nx) <= 1e-12 * (1 + std::abs(a) * nx));
      REQUIRE(eval_norm(s, -x) == nx);
      // Equivalence constants bracket the norm.
      REQUIRE(nx >= s.c1() * x.norm() * (1 - 1e-12));
      REQUIRE(nx <= s.c2() * x.norm() * (1 + 1e-12));
    }
  }
}

TEST_CASE("dual norm values and Cauchy-Schwarz consistency") {
  CHECK(dual_eval(Space::lp(1, 2), vec({1, -2})) == 2.0);
  CHECK(dual_eval(Space::lp(2, 2), vec({3, 4})) == doctest::Approx(5.0));
  const Space cross = Space::polytope({vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})});
  CHECK(dual_eval(cross, vec({1, 1})) == 1.0);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (const auto& s : all_kinds()) {
    if (std::holds_alternative<VoronoiKind>(s.kind())) continue;
    CAPTURE(s.label());
    double best_ratio = 0.0;
    for (int trial = 0; trial < 5000; ++trial) {
      Vector x(s.dim()), f(s.dim());
      for (int i = 0; i < s.dim(); ++i) {
        x[i] = g(rng);
        f[i] = g(rng);
      }
      const double df = dual_eval(s, f), nx = eval_norm(s, x);
      REQUIRE(f.dot(x) <= df * nx + 1e-12);
      best_ratio = std::max(best_ratio, f.dot(x) / (df * nx));
    }
    CHECK(best_ratio > 0.5);
  }
}

TEST_CASE("duality functional") {
  const Vector x = vec({0.6, 0.8});
  CHECK((duality_functional(Space::lp(2, 2), x) - x).norm() < 1e-15);
  CHECK((duality_functional(Space::lp(3, 2), vec({1, 0})) - vec({1, 0})).norm() == 0.0);

  const double c = std::pow(2.0, -0.25);
  const Space l4 = Space::lp(4, 2);
  const Vector f = duality_functional(l4, vec({c, c}));
  // Independent check: <f,x> = 1 and the l_{4/3} norm of f is 1.
  CHECK(f.dot(vec({c, c})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(2.0 * std::pow(std::abs(f[0]), 4.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f[0] == doctest::Approx(std::pow(2.0, -0.75)));

  CHECK_THROWS_AS(duality_functional(Space::lp(1, 2), vec({1, 0})), NonSmoothPoint);
  const Space sq = Space::polytope({vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})});
  CHECK_THROWS_AS(duality_functional(sq, vec({1, 1})), NonSmoothPoint);
  CHECK((duality_functional(sq, vec({1, 0.3})) - vec({1, 0})).norm() < 1e-15);
  CHECK_THROWS_AS(duality_functional(Space::lp(2, 2), vec({1, 1})), InvalidInput);
}

TEST_CASE("functionals annihilate Birkhoff-James orthogonal directions") {
  const std::vector<Space> smooth = {
      Space::lp(2, 3), Space::lp(3, 3), Space::lp(1.5, 3),
      Space::weighted_lp(4, vec({1, 3, 0.2})),
      Space::direct_sum(Space::lp(2, 1), Space::lp(3, 2), 3)};
  for (const auto& s : smooth) {
    CAPTURE(s.label());
    const auto xs = sphere_sample(s, 200, 3);
    const auto ws = sphere_sample(Space::lp(2, s.dim()), 200, 4);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Vector f = duality_functional(s, xs[i], 1e-9);
      REQUIRE(dual_eval(s, f) == doctest::Approx(1.0).epsilon(1e-9));
      REQUIRE(f.dot(xs[i]) == doctest::Approx(1.0).epsilon(1e-9));
      const Vector v = ws[i] - (f.dot(ws[i]) / f.squaredNorm()) * f;
      if (v.norm() < 1e-6) continue;
      REQUIRE(bj_orthogonal(s, xs[i], v, 1e-8));
    }
  }
}

TEST_CASE("bj_orthogonal examples") {
  CHECK(bj_orthogonal(Space::lp(2, 2), vec({1, 0}), vec({0, 1}), 1e-8));
  CHECK(bj_orthogonal(Space::lp(1, 2), vec({1, 0}), vec({0, 1}), 1e-8));
  CHECK_FALSE(bj_orthogonal(Space::lp(2, 2), vec({1, 0}), vec({1, 1}) / std::sqrt(2.0), 1e-8));
  CHECK_THROWS_AS(bj_orthogonal(Space::lp(2, 2), vec({0, 0}), vec({0, 1}), 1e-8), InvalidInput);
  CHECK_THROWS_AS(bj_orthogonal(Space::lp(2, 2), vec({1, 0}), vec({0, 0}), 1e-8), InvalidInput);
}

TEST_CASE("sphere_sample is normalized and deterministic") {
  const Space l1 = Space::lp(1, 2);
  const auto a = sphere_sample(l1, 10000, 42);
  for (const auto& x : a) REQUIRE(std::abs(std::abs(x[0]) + std::abs(x[1]) - 1.0) <= 1e-12);
  const auto b = sphere_sample(l1, 10000, 42);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
  for (const auto& s : all_kinds()) {
    const auto one = sphere_sample(s, 1, 9);
    CHECK(std::abs(eval_norm(s, one[0]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("space descriptors round-trip through JSON") {
  const Json j = Json::parse(R"({"kind":"sum","r":"inf","left":{"kind":"lp","p":1,"n":2},
                                 "right":{"kind":"polytope","vertices":[[1,0],[-1,0],[0,1],[0,-1]]}})");
  const Space s = space_from_json(j);
  CHECK(s.dim() == 4);
  const Space t = space_from_json(space_to_json(s));
  const Vector x = vec({0.1, -2, 0.3, 0.4});
  CHECK(eval_norm(s, x) == eval_norm(t, x));
  CHECK(eval_norm(s, x) == doctest::Approx(2.1));
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"lp","p":0.5,"n":2})")), InvalidInput);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"cone"})")), InvalidInput);
  CHECK_THROWS_AS(space_from_json(Json::parse(
                      R"({"kind":"voronoi","lattice":[[1,0],[0,1]],"base":{"kind":"lp","p":1,"n":2}})")),
                  Unsupported);
}
