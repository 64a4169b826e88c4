#include "packlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace packlab {

namespace {

ChainCheck make_check(std::string lhs, double lv, std::string rhs, double rv) {
  ChainCheck c;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  c.lhs_value = lv;
  c.rhs_value = rv;
  c.slack = rv - lv;
  c.holds = c.slack >= -1e-9;
  return c;
}

CertifiedInterval between(double lo, double hi, std::string method) { return {lo, hi, std::move(method), 0}; }

// 2/2^{1/p}, written as 2/(1 + phi_p(1)) so it matches the octahedral upper bound bit for bit.
double two_over_root(double p) { return 2.0 / (1.0 + phi_p(p, 1.0)); }

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidInput(std::string(what) + " must be >= 1");
}

}  // namespace

bool BoundReport::all_hold() const {
  return std::all_of(chain_checks.begin(), chain_checks.end(), [](const ChainCheck& c) { return c.holds; });
}

const BoundEntry& BoundReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw InvalidInput("bound report: no entry " + name);
}

Json BoundReport::to_json() const {
  Json j;
  j["space"] = space_label;
  j["entries"] = Json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"name", e.name}, {"value", interval_to_json(e.value)}, {"provenance", e.provenance}});
  j["chain_checks"] = Json::array();
  for (const auto& c : chain_checks)
    j["chain_checks"].push_back({{"lhs", c.lhs},
                                 {"rhs", c.rhs},
                                 {"lhs_value", c.lhs_value},
                                 {"rhs_value", c.rhs_value},
                                 {"holds", c.holds},
                                 {"slack", c.slack}});
  j["notes"] = notes;
  j["all_hold"] = all_hold();
  return j;
}

std::string BoundReport::to_table() const {
  std::size_t w = 8;
  for (const auto& e : entries) w = std::max(w, e.name.size());
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << space_label << "\n";
  for (const auto& e : entries) {
    os << "  " << std::left << std::setw(static_cast<int>(w)) << e.name << "  ";
    if (e.value.lo == e.value.hi)
      os << std::right << std::setw(10) << e.value.lo << std::setw(13) << "";
    else
      os << "[" << e.value.lo << ", " << e.value.hi << "]";
    os << "  " << e.provenance << "\n";
  }
  for (const auto& c : chain_checks)
    os << "  check " << c.lhs << " <= " << c.rhs << ": " << c.lhs_value << " <= " << c.rhs_value
       << (c.holds ? "  ok" : "  FAILS") << "\n";
  for (const auto& n : notes) os << "  note: " << n << "\n";
  return os.str();
}

BoundReport chain_report(const Space& space, double p_outer, const EvalBudget& budget, std::uint64_t seed) {
  if (space.dim() < 2) throw InvalidInput("chain_report: dimension must be >= 2");
  check_exponent(p_outer, "chain_report: outer exponent");
  BoundReport rep;
  rep.space_label = space.label();
  const auto d1 = delta(space, 1.0, budget, derive_seed(seed, "delta"));
  const auto f1 = tangential(space, 1.0, budget, derive_seed(seed, "tangential"));
  const auto tx = t_x(space, budget, derive_seed(seed, "t_x"));
  rep.entries.push_back({"delta(1)", d1, "modulus of convexity, " + d1.method});
  rep.entries.push_back({"phi_X(1)", f1, "tangential modulus, " + f1.method});
  rep.entries.push_back({"t_X", tx, "tangential threshold, " + tx.method});

  // Lower bound 1/(1 - delta(1)): increasing in delta.
  const auto lower = between(1.0 / (1.0 - d1.lo), 1.0 / (1.0 - d1.hi), "1/(1-delta(1))");
  // Upper bounds are decreasing in phi.
  const auto upper = between(2.0 / (1.0 + f1.hi), 2.0 / (1.0 + f1.lo), "2/(1+phi_X(1))");
  const auto upper_outer = between(2.0 / (1.0 + phi_p(p_outer, f1.hi)), 2.0 / (1.0 + phi_p(p_outer, f1.lo)),
                                   "2/(1+phi_p(phi_X(1)))");
  const auto upper_t = between(2.0 * tx.lo, 2.0 * tx.hi, "2 t_X");
  const auto kottman = between(2.0 * (1.0 - d1.hi), 2.0 * (1.0 - d1.lo), "2(1-delta(1))");
  rep.entries.push_back({"gamma lower", lower, "superreflexive lower bound via delta(1)"});
  rep.entries.push_back({"gamma* upper (phi)", upper, "octahedral-type upper bound via phi_X(1)"});
  if (p_outer != 1.0) {
    std::ostringstream nm;
    nm << "gamma* upper (p=" << p_outer << ")";
    rep.entries.push_back({nm.str(), upper_outer, "upper bound for the p-sum with l_p"});
  }
  rep.entries.push_back({"gamma* upper (t_X)", upper_t, "upper bound via t_X"});
  rep.entries.push_back({"Kottman upper", kottman, "K <= 2(1-delta(1))"});

  rep.chain_checks.push_back(make_check("1/(1-delta(1))", lower.hi, "2/(1+phi_X(1))", upper.lo));
  rep.chain_checks.push_back(make_check("1/(1+phi_X(1))", 1.0 / (1.0 + f1.lo), "t_X", tx.lo));
  if (lower.hi > upper_t.lo + 1e-9)
    rep.notes.push_back("lower bound interval crosses the 2 t_X upper bound");
  if (d1.hi == 0.0 && f1.hi == 0.0) rep.notes.push_back("delta and phi vanish; the chain degenerates to [1, 2]");
  return rep;
}

NamedFamily::Kind family_kind_from_string(const std::string& name) {
  using K = NamedFamily::Kind;
  if (name == "lp") return K::LpSum;
  if (name == "Lp") return K::LpMeasureSum;
  if (name == "octahedral") return K::SeparableOctahedral;
  if (name == "ck") return K::CKZeroDim;
  if (name == "linf") return K::LInf;
  if (name == "gamma2") return K::GammaTwo;
  throw InvalidInput("unknown family '" + name + "' (lp, Lp, octahedral, ck, linf, gamma2)");
}

double kottman_lp(double p) {
  check_exponent(p, "kottman_lp: p");
  return std::isinf(p) ? 1.0 : std::pow(2.0, 1.0 / p);
}

double kottman_Lp(double p) {
  check_exponent(p, "kottman_Lp: p");
  if (std::isinf(p) || p == 1.0) return 2.0;
  return std::max(std::pow(2.0, 1.0 / p), std::pow(2.0, 1.0 / conjugate_exponent(p)));
}

double gamma_lower_from_kottman(double k) {
  if (!(k >= 1.0 && k <= 2.0)) throw InvalidInput("Kottman constant must lie in [1, 2]");
  return 2.0 / k;
}

double banach_mazur_transfer(double d_bm, double gamma_x) {
  if (!(d_bm >= 1.0)) throw InvalidInput("Banach-Mazur distance must be >= 1");
  if (!(gamma_x >= 1.0)) throw InvalidInput("gamma must be >= 1");
  return d_bm * gamma_x;
}

BoundReport named_gamma(const NamedFamily& f) {
  using K = NamedFamily::Kind;
  BoundReport rep;
  std::ostringstream label;
  label << std::setprecision(12);
  auto exact = [&](double v, const std::string& why) {
    rep.entries.push_back({"gamma", CertifiedInterval::exact(v, "analytic"), why});
    rep.entries.push_back({"gamma*", CertifiedInterval::exact(v, "analytic"), why});
  };
  switch (f.kind) {
    case K::LpSum:
    case K::LpMeasureSum: {
      check_exponent(f.p, "named_gamma: p");
      check_exponent(f.r, "named_gamma: r");
      if (std::isinf(f.p)) throw InvalidInput("named_gamma: p must be finite");
      const bool atomic = f.kind == K::LpSum;
      const double q = conjugate_exponent(f.p);
      label << (atomic ? "l_" : "L_") << f.p << (atomic ? "(kappa)" : "(mu)") << " (+)_" << f.r << " Y";
      rep.space_label = label.str();
      rep.notes.push_back("q = " + std::to_string(q) + ", 1/p + 1/q = " + std::to_string(1.0 / f.p + 1.0 / q));
      const double kx = atomic ? kottman_lp(f.p) : kottman_Lp(f.p);
      rep.entries.push_back({"K", CertifiedInterval::exact(kx, "analytic"),
                             atomic ? "K(l_p) = 2^{1/p}" : "K(L_p) = max{2^{1/p}, 2^{1/q}}"});
      const double lo = atomic ? two_over_root(f.p) : std::min(two_over_root(f.p), two_over_root(q));
      double hi;
      std::string why;
      if (f.r <= f.p) {
        hi = two_over_root(f.p);
        why = "phi_p-octahedral sum, r <= p";
      } else if (!std::isinf(f.r)) {
        hi = two_over_root(f.r);
        why = "phi_r-octahedral sum, p <= r";
      } else {
        if (!f.y_gamma_star) throw InvalidInput("named_gamma: r = inf needs gamma*(Y)");
        if (!(*f.y_gamma_star >= 1.0)) throw InvalidInput("named_gamma: gamma*(Y) must be >= 1");
        hi = std::max(two_over_root(f.p), *f.y_gamma_star);
        why = "sup-sum: max{2/2^{1/p}, gamma*(Y)}";
      }
      if (lo == hi) {
        exact(lo, why + ", lower bound 2/K");
      } else {
        rep.entries.push_back({"gamma", between(lo, hi, "analytic"), "2/K lower bound; " + why});
        rep.entries.push_back({"gamma*", between(lo, hi, "analytic"), "2/K lower bound; " + why});
      }
      break;
    }
    case K::SeparableOctahedral:
      rep.space_label = "separable octahedral";
      exact(1.0, "separable octahedral spaces have gamma* = 1");
      break;
    case K::CKZeroDim:
      rep.space_label = "C(K), K zero-dimensional";
      exact(1.0, "even-integer valued functions are 2-separated and 1-dense");
      break;
    case K::LInf:
      rep.space_label = "L_inf(mu)";
      exact(1.0, "even-integer rounding gives a lattice tiling by balls");
      break;
    case K::GammaTwo: {
      check_exponent(f.p, "named_gamma: p");
      if (f.ms.empty()) throw InvalidInput("named_gamma: gamma2 needs at least one M");
      for (double v : f.pk) check_exponent(v, "named_gamma: p_k");
      label << "(sum_k l_{p_k}(omega_k))_{l_" << f.p << "}";
      rep.space_label = label.str();
      double prev = 0.0;
      for (double m : f.ms) {
        if (!(m >= 1.0) || !std::isfinite(m)) throw InvalidInput("named_gamma: M must be a finite real >= 1");
        std::ostringstream nm, why;
        nm << "gamma lower (M=" << m << ")";
        why << "2/K of the tail, K <= 2^{1/M}";
        if (!f.pk.empty()) {
          // First n with p_k >= M for every listed k >= n.
          int n = static_cast<int>(f.pk.size());
          while (n > 0 && f.pk[n - 1] >= m) --n;
          if (n < static_cast<int>(f.pk.size()))
            why << ", n = " << n + 1;
          else
            why << ", n beyond the listed p_k";
        }
        const double v = two_over_root(m);
        rep.entries.push_back({nm.str(), CertifiedInterval::exact(v, "analytic"), why.str()});
        if (prev > 0.0) rep.chain_checks.push_back(make_check("previous rung", prev, nm.str(), v));
        prev = v;
      }
      rep.entries.push_back({"gamma", CertifiedInterval::exact(2.0, "analytic"), "supremum of the ladder"});
      break;
    }
  }
  return rep;
}

double phi_octahedral_upper(const Modulus& phi) {
  if (!phi.is_modulus()) throw InvalidInput("phi_octahedral_upper: input is not a modulus");
  return 2.0 / (1.0 + phi(1.0));
}

MinkowskiNode minkowski_node(double a, double b, double r, double p) {
  if (!(r >= 1.0) || !(p >= r) || std::isinf(p)) throw InvalidInput("minkowski: need 1 <= r <= p < inf");
  if (!(a >= 0.0) || !(b >= 0.0)) throw InvalidInput("minkowski: alpha, beta must be >= 0");
  const double lhs = std::pow(std::pow(std::pow(a, p) + 1.0, r / p) + std::pow(b, r), 1.0 / r);
  const double rhs = std::pow(std::pow(std::pow(a, r) + std::pow(b, r), p / r) + 1.0, 1.0 / p);
  return {a, b, r, p, lhs, rhs};
}

MinkowskiReport minkowski_type_check(const std::vector<double>& alphas, const std::vector<double>& betas,
                                     const std::vector<double>& rs, const std::vector<double>& ps, double tol) {
  MinkowskiReport rep;
  for (double r : rs)
    for (double p : ps) {
      if (r > p) {
        rep.rejected += static_cast<long>(alphas.size() * betas.size());
        continue;
      }
      for (double a : alphas)
        for (double b : betas) {
          const auto n = minkowski_node(a, b, r, p);
          ++rep.nodes;
          const double margin = n.lhs - n.rhs;
          rep.worst_margin = std::min(rep.worst_margin, margin);
          if (margin < -tol * std::max(1.0, n.rhs)) rep.violations.push_back(n);
        }
    }
  return rep;
}

int lp_step1_check(double p, double eps) {
  check_exponent(p, "lp_step1_check: p");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("lp_step1_check: need 0 < eps < 1");
  for (int n = 1; n <= 1 << 16; ++n) {
    const double h = std::ldexp(1.0, -n);
    const double lhs = std::exp(std::log1p(-h) / p) - std::pow(h, 1.0 / p);
    if (lhs >= 1.0 - eps) return n;
  }
  throw BudgetExhausted("lp_step1_check: no n below 65536");
}

}  // namespace packlab
