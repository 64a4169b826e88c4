#include <doctest.h>

#include "packlab/suptiling.hpp"

#include <cmath>
#include <random>

using namespace packlab;

namespace {

SimpleFunction labelled(std::vector<double> v) {
  SimpleFunction f;
  for (std::size_t i = 0; i < v.size(); ++i) f.cells.push_back("c" + std::to_string(i));
  f.values = std::move(v);
  return f;
}

// All binary strings of length d.
std::vector<std::string> cylinders(int d) {
  std::vector<std::string> out;
  for (int m = 0; m < (1 << d); ++m) {
    std::string s;
    for (int b = d - 1; b >= 0; --b) s += ((m >> b) & 1) ? '1' : '0';
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("round_even examples") {
  const auto g = round_even(labelled({0.3, -1.2, 3.9}));
  CHECK(g.values == std::vector<double>{0, -2, 4});
  CHECK(sup_distance(labelled({0.3, -1.2, 3.9}), g) == doctest::Approx(0.8));
  CHECK(round_even_value(1.0) == 2.0);
  CHECK(round_even_value(-1.0) == 0.0);
  CHECK(round_even_value(3.0) == 4.0);
  CHECK(round_even_value(std::nextafter(1.0, 0.0)) == 0.0);
  CHECK(round_even_value(-0.0) == 0.0);
  CHECK(std::abs(round_even_value(1.0) - 1.0) == 1.0);
  CHECK(round_even_value(1e15 + 1) == 1e15 + 2);
  CHECK_THROWS_AS(round_even_value(NAN), InvalidInput);
}

TEST_CASE("zero-dimensional rounding") {
  auto [g, bound] = round_even_zero_dim(labelled({0.95}), 0.1);
  CHECK(g.values[0] == 0.0);
  CHECK(bound == doctest::Approx(1.1));
  auto [g0, b0] = round_even_zero_dim(labelled({2.5, -7.1}), 0.0);
  CHECK(g0.values == round_even(labelled({2.5, -7.1})).values);
  CHECK(b0 == 1.0);
  CHECK_THROWS_AS(round_even_zero_dim(labelled({1}), -0.1), InvalidInput);

  // 2^6 cylinders with osc 0.5: any function within 0.5 of the representative
  // on each cell (modelled at depth 9) stays within 1.5 of the rounding.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> val(-10, 10), jitter(-0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    SimpleFunction f{cylinders(6), {}};
    for (std::size_t i = 0; i < f.cells.size(); ++i) f.values.push_back(val(rng));
    auto [r, b] = round_even_zero_dim(f, 0.5);
    CHECK(b == 1.5);
    SimpleFunction fine{cylinders(9), {}};
    for (const auto& c : fine.cells) fine.values.push_back(f.values[std::stoi(c.substr(0, 6), nullptr, 2)] + jitter(rng));
    CHECK(sup_distance(fine, r) <= 1.5);
  }
}

TEST_CASE("separation of even-valued functions") {
  CHECK(check_even_separation(labelled({0, 0, 0}), labelled({0, 2, 0})) == 2.0);
  CHECK(check_even_separation(labelled({4, -2}), labelled({4, -2})) == 0.0);
  CHECK_THROWS_AS(check_even_separation(labelled({1}), labelled({0})), InvalidInput);
  // Different cylinder partitions compare through their common refinement.
  SimpleFunction a{{"0", "1"}, {0, 2}}, b{{"00", "01", "1"}, {0, 2, 2}};
  CHECK(check_even_separation(a, b) == 2.0);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> k(-5, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> x(8), y(8);
    for (int i = 0; i < 8; ++i) x[i] = 2.0 * k(rng), y[i] = 2.0 * k(rng);
    const double d = check_even_separation(labelled(x), labelled(y));
    CHECK((x == y ? d == 0.0 : d >= 2.0));
  }
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(round_even(SimpleFunction{{"0", "01"}, {1, 2}}), InvalidInput);
  CHECK_THROWS_AS(round_even(SimpleFunction{{"0"}, {1}}), InvalidInput);
  CHECK_THROWS_AS(round_even(SimpleFunction{{"a", "a"}, {1, 2}}), InvalidInput);
  CHECK_THROWS_AS(round_even(SimpleFunction{{"a"}, {1, 2}}), InvalidInput);
  CHECK_THROWS_AS(sup_distance(labelled({1}), SimpleFunction{{"x"}, {1}}), InvalidInput);
  CHECK_NOTHROW(round_even(SimpleFunction{{""}, {1}}));
}

TEST_CASE("rounding properties on random simple functions") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> val(-10, 10);
  std::uniform_int_distribution<int> ncell(1, 16), shift(-20, 20);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> v(ncell(rng));
    for (auto& x : v) x = val(rng);
    const auto f = labelled(v);
    const auto g = round_even(f);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = g.values[i];
      CHECK(std::fmod(w, 2.0) == 0.0);
      CHECK((w - 1.0 <= v[i] && v[i] < w + 1.0));
    }
    CHECK(sup_distance(f, g) <= 1.0);
    CHECK(round_even(g).values == g.values);
    const int k = shift(rng);
    auto fs = f;
    for (auto& x : fs.values) x += 2.0 * k;
    auto gs = round_even(fs);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(gs.values[i] == g.values[i] + 2.0 * k);
  }
}

TEST_CASE("json round trip") {
  const SimpleFunction f{{"0", "10", "11"}, {0.5, -3.0, 1.0}};
  const auto back = simple_function_from_json(simple_function_to_json(f));
  CHECK(back.cells == f.cells);
  CHECK(back.values == f.values);
  CHECK_THROWS_AS(simple_function_from_json(Json{{"cells", {"a"}}}), InvalidInput);
}
