#include "packlab/suptiling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace packlab {

namespace {

bool binary(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

bool prefix_of(const std::string& a, const std::string& b) {
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

bool is_even_integer(double v) { return std::isfinite(v) && std::fmod(v, 2.0) == 0.0; }

}  // namespace

bool SimpleFunction::cantor() const {
  return std::all_of(cells.begin(), cells.end(), binary);
}

void SimpleFunction::validate() const {
  if (cells.size() != values.size()) throw InvalidInput("simple function: cells and values differ in length");
  if (cells.empty()) throw InvalidInput("simple function: no cells");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("simple function: non-finite value");
  std::set<std::string> seen(cells.begin(), cells.end());
  if (seen.size() != cells.size()) throw InvalidInput("simple function: repeated cell");
  if (!cantor()) return;
  // Cylinders: pairwise disjoint (no prefixes) and of total measure 1.
  std::vector<std::string> sorted(seen.begin(), seen.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (prefix_of(sorted[i], sorted[i + 1]))
      throw InvalidInput("simple function: overlapping cells " + sorted[i] + ", " + sorted[i + 1]);
  long double mass = 0.0L;
  for (const auto& c : sorted) {
    if (c.size() > 60) throw InvalidInput("simple function: cell deeper than 60 levels");
    mass += std::ldexp(1.0L, -static_cast<int>(c.size()));
  }
  if (mass != 1.0L) throw InvalidInput("simple function: cylinders do not cover the space");
}

double round_even_value(double v) {
  if (!std::isfinite(v)) throw InvalidInput("round_even: non-finite value");
  double k = std::floor((v + 1.0) / 2.0);
  // The division can round across a bracket edge; settle with exact compares.
  while (v < 2.0 * k - 1.0) k -= 1.0;
  while (v >= 2.0 * k + 1.0) k += 1.0;
  return 2.0 * k + 0.0;
}

SimpleFunction round_even(const SimpleFunction& f) {
  f.validate();
  SimpleFunction g = f;
  for (auto& v : g.values) v = round_even_value(v);
  return g;
}

std::pair<SimpleFunction, double> round_even_zero_dim(const SimpleFunction& f, double osc) {
  if (!(osc >= 0.0) || !std::isfinite(osc)) throw InvalidInput("round_even_zero_dim: osc must be >= 0");
  return {round_even(f), 1.0 + osc};
}

double sup_distance(const SimpleFunction& f, const SimpleFunction& g) {
  f.validate();
  g.validate();
  double best = 0.0;
  if (f.cantor() && g.cantor()) {
    for (std::size_t i = 0; i < f.cells.size(); ++i)
      for (std::size_t j = 0; j < g.cells.size(); ++j)
        if (prefix_of(f.cells[i], g.cells[j]) || prefix_of(g.cells[j], f.cells[i]))
          best = std::max(best, std::abs(f.values[i] - g.values[j]));
    return best;
  }
  if (std::set<std::string>(f.cells.begin(), f.cells.end()) !=
      std::set<std::string>(g.cells.begin(), g.cells.end()))
    throw InvalidInput("sup_distance: partitions have no computable common refinement");
  for (std::size_t i = 0; i < f.cells.size(); ++i) {
    const auto j = static_cast<std::size_t>(
        std::find(g.cells.begin(), g.cells.end(), f.cells[i]) - g.cells.begin());
    best = std::max(best, std::abs(f.values[i] - g.values[j]));
  }
  return best;
}

double check_even_separation(const SimpleFunction& g1, const SimpleFunction& g2) {
  for (const auto* g : {&g1, &g2})
    for (double v : g->values)
      if (!is_even_integer(v)) throw InvalidInput("check_even_separation: values must be even integers");
  const double d = sup_distance(g1, g2);
  if (d != 0.0 && d < 2.0) throw VerificationFailure("check_even_separation: distinct functions closer than 2");
  return d;
}

Json simple_function_to_json(const SimpleFunction& f) {
  return Json{{"cells", f.cells}, {"values", f.values}};
}

SimpleFunction simple_function_from_json(const Json& j) {
  SimpleFunction f;
  try {
    f.cells = j.at("cells").get<std::vector<std::string>>();
    f.values = j.at("values").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("simple function json: ") + e.what());
  }
  f.validate();
  return f;
}

}  // namespace packlab
