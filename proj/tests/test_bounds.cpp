#include <doctest.h>

#include "packlab/bounds.hpp"
#include "packlab/subgroup.hpp"

#include <cmath>

using namespace packlab;

namespace {
const EvalBudget kBudget{4'000'000, 24};
}

TEST_CASE("chain report on l_2^4") {
  const auto rep = chain_report(Space::lp(2, 4), 1.0, kBudget, 3);
  CHECK(rep.entry("gamma lower").value.hi == doctest::Approx(1.0 / (std::sqrt(3.0) / 2)).epsilon(1e-4));
  CHECK(rep.entry("gamma* upper (phi)").value.lo == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(rep.all_hold());
  CHECK(rep.to_json()["all_hold"].get<bool>());
  CHECK(rep.to_table().find("delta(1)") != std::string::npos);
}

TEST_CASE("chain report degenerates on l_1^2") {
  const auto rep = chain_report(Space::lp(1, 2), 1.0, kBudget, 3);
  CHECK(rep.entry("gamma lower").value.lo == doctest::Approx(1.0));
  CHECK(rep.entry("gamma* upper (phi)").value.hi == doctest::Approx(2.0));
  CHECK(rep.all_hold());
  CHECK_THROWS_AS(chain_report(Space::lp(2, 1)), InvalidInput);
}

TEST_CASE("chain report checks hold for l_p^2") {
  for (double p : {1.5, 3.0, 4.0}) {
    const auto rep = chain_report(Space::lp(p, 2), 2.0, kBudget, 5);
    CHECK(rep.all_hold());
    // The lower bound never exceeds the certified-side upper bounds.
    CHECK(rep.entry("gamma lower").value.hi <= rep.entry("gamma* upper (t_X)").value.lo + 1e-9);
    CHECK(rep.entry("gamma* upper (p=2)").value.lo >= rep.entry("gamma* upper (phi)").value.lo - 1e-12);
  }
}

TEST_CASE("named families") {
  NamedFamily f;
  f.kind = NamedFamily::Kind::LpSum;
  f.p = 2;
  f.r = 1;
  auto rep = named_gamma(f);
  CHECK(rep.entry("gamma").value.lo == doctest::Approx(std::sqrt(2.0)));
  CHECK(rep.entry("gamma*").value.hi == rep.entry("gamma").value.lo);

  f.kind = NamedFamily::Kind::LpMeasureSum;
  f.p = 1.5;
  rep = named_gamma(f);
  CHECK(rep.entry("gamma").value.lo == doctest::Approx(std::cbrt(2.0)));
  CHECK(rep.entry("gamma").value.hi == rep.entry("gamma").value.lo);

  f.p = 3;
  rep = named_gamma(f);
  CHECK(rep.entry("gamma").value.lo == doctest::Approx(2 / std::pow(2.0, 2.0 / 3)));
  CHECK(rep.entry("gamma").value.hi == doctest::Approx(2 / std::cbrt(2.0)));
  CHECK(rep.entry("K").value.lo == doctest::Approx(std::pow(2.0, 2.0 / 3)));

  f.kind = NamedFamily::Kind::LpSum;
  f.p = 2;
  f.r = 4;
  rep = named_gamma(f);
  CHECK(rep.entry("gamma").value.lo == doctest::Approx(std::sqrt(2.0)));
  CHECK(rep.entry("gamma").value.hi == doctest::Approx(2 / std::pow(2.0, 0.25)));

  f.r = kInf;
  CHECK_THROWS_AS(named_gamma(f), InvalidInput);
  f.y_gamma_star = 1.9;
  CHECK(named_gamma(f).entry("gamma*").value.hi == 1.9);

  for (auto k : {NamedFamily::Kind::SeparableOctahedral, NamedFamily::Kind::CKZeroDim, NamedFamily::Kind::LInf}) {
    NamedFamily g;
    g.kind = k;
    CHECK(named_gamma(g).entry("gamma*").value.hi == 1.0);
  }
  CHECK_THROWS_AS(family_kind_from_string("nope"), InvalidInput);
}

TEST_CASE("conjugate exponents and table consistency") {
  for (double p : {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 7.0}) {
    const double q = conjugate_exponent(p);
    if (!std::isinf(q)) CHECK(1 / p + 1 / q == doctest::Approx(1.0).epsilon(1e-15));
    const double a = 2 / std::pow(2.0, 1 / p), b = std::isinf(q) ? 2.0 : 2 / std::pow(2.0, 1 / q);
    CHECK((p <= 2) == (std::min(a, b) == a));
    NamedFamily f;
    f.kind = NamedFamily::Kind::LpSum;
    f.p = p;
    f.r = 1;
    CHECK(named_gamma(f).entry("gamma").value.lo == phi_octahedral_upper(Modulus::phi_p(p)));
  }
}

TEST_CASE("gamma2 ladder") {
  NamedFamily f;
  f.kind = NamedFamily::Kind::GammaTwo;
  f.p = 1;
  f.ms = {2, 4, 8, 16};
  f.pk = {1, 2, 3, 5, 8, 13, 21};
  const auto rep = named_gamma(f);
  const double expect[] = {1.414214, 1.681793, 1.834008, 1.915207};
  for (int i = 0; i < 4; ++i) {
    const auto& e = rep.entries[i];
    CHECK(e.value.lo == doctest::Approx(2 / std::pow(2.0, 1 / f.ms[i])).epsilon(1e-15));
    CHECK(std::abs(e.value.lo - expect[i]) <= 1e-6);
  }
  CHECK(rep.all_hold());
  CHECK(rep.entries[1].provenance.find("n = 4") != std::string::npos);
  CHECK(rep.entry("gamma").value.lo == 2.0);
}

TEST_CASE("octahedral upper bound") {
  CHECK(phi_octahedral_upper(Modulus::phi_p(2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(phi_octahedral_upper(Modulus::identity()) == 1.0);
  const auto c = compose(Modulus::phi_p(3), Modulus::phi_p(2));
  CHECK(phi_octahedral_upper(c) == doctest::Approx(2 / (1 + phi_p(3, phi_p(2, 1)))));
  CHECK_THROWS_AS(phi_octahedral_upper(Modulus::table({0, 1, 2}, {0, 1, 1.5}, "t")), InvalidInput);
}

TEST_CASE("Minkowski-type inequality") {
  std::vector<double> grid;
  for (int i = 0; i <= 6; ++i) grid.push_back(0.5 * i);
  const auto rep = minkowski_type_check(grid, grid, {1, 1.5, 2}, {2, 3, 4});
  CHECK(rep.ok());
  CHECK(rep.nodes == 7 * 7 * 9);
  for (double p : {1.0, 2.0, 3.5}) {
    const auto n = minkowski_node(1.3, 0.7, p, p);
    CHECK(std::abs(n.lhs - n.rhs) <= 1e-12);
  }
  const auto z = minkowski_node(0, 2, 1.5, 3);
  CHECK(z.lhs == doctest::Approx(std::pow(1 + std::pow(2, 1.5), 1 / 1.5)));
  CHECK(z.lhs >= z.rhs);
  CHECK_THROWS_AS(minkowski_node(1, 1, 3, 2), InvalidInput);
  CHECK(minkowski_type_check({1}, {1}, {3}, {2}).rejected == 1);
}

TEST_CASE("step-1 arithmetic") {
  CHECK(lp_step1_check(1, 0.5) == 2);
  CHECK(lp_step1_check(2, 0.9) == 2);
  int prev = 0;
  for (double eps : {0.9, 0.5, 0.1, 0.01, 1e-3, 1e-6}) {
    const int n = lp_step1_check(2.5, eps);
    CHECK(n >= prev);
    const double h = std::ldexp(1.0, -n);
    CHECK(std::pow(1 - h, 1 / 2.5) - std::pow(h, 1 / 2.5) >= 1 - eps);
    if (n > 1) {
      const double h1 = std::ldexp(1.0, -(n - 1));
      CHECK(std::pow(1 - h1, 1 / 2.5) - std::pow(h1, 1 / 2.5) < 1 - eps);
    }
    prev = n;
  }
  CHECK(prev > 30);
  CHECK_THROWS_AS(lp_step1_check(2, 1.0), InvalidInput);
}

TEST_CASE("analytic helpers and subgroup cross-check") {
  CHECK(kottman_lp(2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(kottman_Lp(4) == doctest::Approx(std::pow(2.0, 0.75)));
  CHECK(gamma_lower_from_kottman(kottman_lp(3)) == doctest::Approx(2 / std::cbrt(2.0)));
  CHECK(banach_mazur_transfer(std::sqrt(2.0), 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(banach_mazur_transfer(0.5, 1.0), InvalidInput);
  for (double p : {1.0, 2.0, 3.0}) {
    const Space s = Space::lp(p, 16);
    auto r = build(s, integer_ball_targets(s, 30, 2.0, 2, 1), DirectionOracle::fresh_coordinate(16),
                   0.95 * std::pow(2.0, 1 / p), 0.05);
    verify(s, r, r.theta);
    NamedFamily f;
    f.p = p;
    CHECK(gamma_star_upper_from_build(r) >= named_gamma(f).entry("gamma*").value.hi - 1e-9);
  }
}
