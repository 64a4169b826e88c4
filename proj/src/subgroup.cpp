#include "packlab/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace packlab {

namespace {

bool coordinate_monotone(const Space& s) {
  if (std::holds_alternative<LpKind>(s.kind()) || std::holds_alternative<WeightedLpKind>(s.kind()))
    return true;
  if (const auto* d = std::get_if<DirectSumKind>(&s.kind()))
    return coordinate_monotone(*d->left) && coordinate_monotone(*d->right);
  return false;
}

bool lp_family(const Space& s) {
  return std::holds_alternative<LpKind>(s.kind()) || std::holds_alternative<WeightedLpKind>(s.kind());
}

std::set<int> support(const Vector& v) {
  std::set<int> s;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s.insert(i);
  return s;
}

std::string coeffs_str(const Coeffs& k) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << "]";
  return os.str();
}

// Depth-first enumeration of subgroup elements g with ||centre - g|| <= radius.
// Pruning uses the Euclidean Gram-Schmidt bound (via c1) and, for norms that
// do not grow under coordinate projection, the norm of the already fixed part
// on coordinates private to a single generator (and zero in the centre).
class SubgroupEnumerator {
 public:
  using Visit = std::function<bool(const Coeffs&, const Vector& element, double dist)>;

  SubgroupEnumerator(const Space& space, const std::vector<Vector>& gens)
      : space_(space), gens_(gens), m_(static_cast<int>(gens.size())), n_(space.dim()) {
    if (m_ > 0) {
      Matrix B(n_, m_);
      for (int j = 0; j < m_; ++j) {
        if (gens[j].size() != n_) throw InvalidInput("subgroup: generator dimension mismatch");
        B.col(j) = gens[j];
      }
      lat_ = Lattice(B);
      for (int i = 0; i < m_; ++i)
        if (!(lat_.gs_norm_sq(i) > 1e-18))
          throw InvalidInput("subgroup: generators are linearly dependent");
    }
    monotone_ = coordinate_monotone(space);
    std::vector<int> owners(n_, 0), owner(n_, -1);
    for (int j = 0; j < m_; ++j)
      for (int c = 0; c < n_; ++c)
        if (gens[j][c] != 0.0) {
          ++owners[c];
          owner[c] = j;
        }
    private_.assign(m_, {});
    for (int c = 0; c < n_; ++c)
      if (owners[c] == 1) private_[owner[c]].push_back(c);
  }

  // Returns false if the node cap was hit.
  bool run(const Vector& centre, double radius, const Visit& visit, long max_nodes) {
    nodes_ = 0;
    capped_ = false;
    stop_ = false;
    centre_ = centre;
    radius_ = radius;
    visit_ = &visit;
    max_nodes_ = max_nodes;
    if (m_ == 0) {
      const double d = space_.norm(centre);
      if (d <= radius) visit(Coeffs(0), Vector::Zero(n_), d);
      return true;
    }
    const auto proj = lat_.project(centre);
    coords_ = proj.coords;
    const double re = radius / space_.c1() * (1.0 + 1e-9) + 1e-12;
    r2_ = re * re;
    k_ = Coeffs::Zero(m_);
    priv_ = Vector::Zero(n_);
    usable_.assign(m_, {});
    for (int j = 0; j < m_; ++j)
      for (int c : private_[j])
        if (centre[c] == 0.0) usable_[j].push_back(c);
    descend(m_ - 1, proj.residual_sq);
    return !capped_;
  }

  long nodes() const { return nodes_; }
  const Lattice& lattice() const { return lat_; }

 private:
  void descend(int i, double part) {
    if (stop_) return;
    const Matrix& R = lat_.r_factor();
    double s = coords_[i];
    for (int j = i + 1; j < m_; ++j)
      s -= (R(i, j) / R(i, i)) * (static_cast<double>(k_[j]) - coords_[j]);
    const double rsq = R(i, i) * R(i, i);
    const double room = r2_ - part;
    if (room < 0.0) return;
    const double w = std::sqrt(room / rsq);
    const long lo = static_cast<long>(std::ceil(s - w - 1e-12));
    const long hi = static_cast<long>(std::floor(s + w + 1e-12));
    for (long v = lo; v <= hi && !stop_; ++v) {
      if (max_nodes_ >= 0 && nodes_ >= max_nodes_) {
        capped_ = stop_ = true;
        return;
      }
      ++nodes_;
      const double d = static_cast<double>(v) - s;
      const double pi = part + rsq * d * d;
      if (pi > r2_) continue;
      k_[i] = v;
      if (monotone_ && !usable_[i].empty()) {
        for (int c : usable_[i]) priv_[c] = -static_cast<double>(v) * gens_[i][c];
        if (space_.norm(priv_) > radius_ * (1.0 + 1e-12) + 1e-12) {
          for (int c : usable_[i]) priv_[c] = 0.0;
          continue;
        }
      }
      if (i == 0) {
        const Vector el = lat_.point(k_);
        const double dist = space_.norm(centre_ - el);
        if (dist <= radius_ && !(*visit_)(k_, el, dist)) stop_ = true;
      } else {
        descend(i - 1, pi);
      }
      for (int c : usable_[i]) priv_[c] = 0.0;
    }
    k_[i] = 0;
  }

  const Space& space_;
  const std::vector<Vector>& gens_;
  int m_, n_;
  Lattice lat_;
  bool monotone_ = false;
  std::vector<std::vector<int>> private_, usable_;
  Vector centre_, coords_, priv_;
  double radius_ = 0.0, r2_ = 0.0;
  Coeffs k_;
  const Visit* visit_ = nullptr;
  long nodes_ = 0, max_nodes_ = -1;
  bool capped_ = false, stop_ = false;
};

// Check ||x - z|| >= theta for sampled unit z in span(basis).
void check_custom_direction(const Space& space, const std::vector<Vector>& basis, const Vector& x,
                            double theta, int target, std::uint64_t seed) {
  auto fail = [&](const Vector& z, double d) {
    std::ostringstream os;
    os << "subgroup: oracle direction for target " << target << " is at distance " << d
       << " < theta from the unit sphere sample [";
    for (int i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
    os << "]";
    throw VerificationFailure(os.str());
  };
  auto test = [&](Vector z) {
    const double nz = space.norm(z);
    if (!(nz > 0.0)) return;
    z /= nz;
    for (double sgn : {1.0, -1.0}) {
      const double d = space.norm(x - sgn * z);
      if (d < theta - 1e-9) fail(sgn * z, d);
    }
  };
  for (const auto& b : basis) test(b);
  if (basis.empty()) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int s = 0; s < 512; ++s) {
    Vector z = Vector::Zero(space.dim());
    for (const auto& b : basis) z += g(rng) * b;
    test(z);
  }
}

}  // namespace

double subgroup_distance(const Space& space, const std::vector<Vector>& generators, const Vector& x,
                         long max_nodes, bool* capped) {
  SubgroupEnumerator en(space, generators);
  // Babai-style start: the best of 0 and rounding the projection.
  double best = space.norm(x);
  if (!generators.empty()) {
    const auto proj = en.lattice().project(x);
    Coeffs k(static_cast<long>(generators.size()));
    for (int i = 0; i < k.size(); ++i) k[i] = std::lround(proj.coords[i]);
    best = std::min(best, space.norm(x - en.lattice().point(k)));
    for (const auto& g : generators)
      best = std::min({best, space.norm(x - g), space.norm(x + g)});
  }
  // Shrink in rounds: a hit at radius r lowers the radius to that distance.
  double r = best;
  bool ok = true;
  while (true) {
    double found = kInf;
    SubgroupEnumerator::Visit v = [&](const Coeffs&, const Vector&, double d) {
      if (d < found) found = d;
      return true;
    };
    ok = en.run(x, r * (1.0 - 1e-12), v, max_nodes);
    if (!ok || !(found < best)) break;
    best = found;
    r = best;
  }
  if (capped) *capped = !ok;
  return best;
}

std::vector<Vector> integer_ball_targets(const Space& space, int count, double radius, int support_dim,
                                         std::uint64_t seed) {
  if (support_dim < 1 || support_dim > space.dim()) throw InvalidInput("targets: bad support dimension");
  if (count < 0 || !(radius >= 0.0)) throw InvalidInput("targets: bad count or radius");
  const long b = static_cast<long>(std::floor(radius / space.c1())) + 1;
  std::vector<Vector> pool;
  std::vector<long> idx(support_dim, -b);
  while (true) {
    Vector v = Vector::Zero(space.dim());
    for (int i = 0; i < support_dim; ++i) v[i] = static_cast<double>(idx[i]);
    if (space.norm(v) <= radius) pool.push_back(v);
    int i = 0;
    while (i < support_dim && ++idx[i] > b) idx[i++] = -b;
    if (i == support_dim) break;
    if (pool.size() > 2'000'000) throw InvalidInput("targets: ball too large to list");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<Vector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(pool[pick(rng)]);
  return out;
}

SubgroupResult build(const Space& space, const std::vector<Vector>& targets, const DirectionOracle& oracle,
                     double theta, double eps, std::uint64_t seed) {
  if (!lp_family(space)) throw Unsupported("subgroup build: only l_p and weighted l_p spaces");
  if (!(theta > 1.0)) throw InvalidInput("subgroup build: theta must exceed 1");
  if (!(eps > 0.0)) throw InvalidInput("subgroup build: eps must be positive");
  for (const auto& t : targets)
    if (t.size() != space.dim() || !t.allFinite()) throw InvalidInput("subgroup build: bad target");
  const double p = space.lp_exponent();
  if (oracle.kind == DirectionOracle::Kind::FreshCoordinate) {
    const double limit = std::isinf(p) ? 1.0 : std::pow(2.0, 1.0 / p);
    if (theta > limit * (1.0 + 1e-12))
      throw InvalidInput("subgroup build: fresh coordinates give distance 2^{1/p} only");
    if (oracle.budget > space.dim()) throw InvalidInput("subgroup build: oracle budget exceeds dimension");
  } else if (theta > oracle.declared_theta * (1.0 + 1e-12)) {
    throw InvalidInput("subgroup build: theta exceeds the oracle's declared distance");
  }

  SubgroupResult res;
  res.space = space;
  res.theta = theta;
  res.eps = eps;
  res.targets = targets;
  // Fresh coordinates avoid every target's support, not only the current one.
  std::set<int> used;
  for (const auto& t : targets)
    for (int c : support(t)) used.insert(c);
  std::size_t next_custom = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vector& u = targets[t];
    TargetDecision dec;
    // Only "within 1?" matters here, so the query radius is 1.
    SubgroupEnumerator en(space, res.generators);
    double d = kInf;
    SubgroupEnumerator::Visit v = [&](const Coeffs&, const Vector&, double dist) {
      d = std::min(d, dist);
      return true;
    };
    dec.heuristic = !en.run(u, 1.0 + 1e-12, v, 1'000'000);
    if (d <= 1.0 + 1e-12) {
      dec.covered_by_existing = true;
      dec.distance = d;
      res.log.push_back(dec);
      continue;
    }
    Vector x;
    if (oracle.kind == DirectionOracle::Kind::FreshCoordinate) {
      int alpha = -1;
      for (int c = 0; c < oracle.budget; ++c)
        if (!used.count(c)) {
          alpha = c;
          break;
        }
      if (alpha < 0) {
        std::ostringstream os;
        os << "subgroup build: fresh coordinates exhausted at target " << t << " after "
           << res.generators.size() << " generators";
        throw BudgetExhausted(os.str());
      }
      x = Vector::Zero(space.dim());
      x[alpha] = 1.0;
      x /= space.norm(x);
    } else {
      if (next_custom >= oracle.candidates.size())
        throw BudgetExhausted("subgroup build: custom oracle exhausted");
      x = oracle.candidates[next_custom++];
      if (x.size() != space.dim()) throw InvalidInput("subgroup build: oracle vector dimension");
      x /= space.norm(x);
      std::vector<Vector> basis = res.generators;
      basis.push_back(u);
      check_custom_direction(space, basis, x, theta, static_cast<int>(t),
                             derive_seed(seed, static_cast<std::uint64_t>(t)));
    }
    const Vector g = u - x;
    for (int c : support(g)) used.insert(c);
    res.generators.push_back(g);
    dec.generator = static_cast<int>(res.generators.size()) - 1;
    dec.distance = space.norm(x);
    res.log.push_back(dec);
  }
  return res;
}

SeparationCertificate verify(const Space& space, SubgroupResult& result, double radius, long max_nodes) {
  if (!(radius >= result.theta)) throw InvalidInput("subgroup verify: radius must be >= theta");
  for (std::size_t j = 0; j < result.generators.size(); ++j) {
    const double nj = space.norm(result.generators[j]);
    if (nj < result.theta - 1e-9) {
      std::ostringstream os;
      os << "subgroup verify: separation violated by generator " << j << " of norm " << nj
         << " < theta " << result.theta;
      throw VerificationFailure(os.str());
    }
  }
  std::optional<SubgroupEnumerator> holder;
  try {
    holder.emplace(space, result.generators);
  } catch (const InvalidInput& e) {
    throw VerificationFailure(std::string("subgroup verify: ") + e.what() +
                              " (the subgroup is not a lattice)");
  }
  SubgroupEnumerator& en = *holder;
  SeparationCertificate cert;
  cert.radius = radius;
  double min_nz = kInf;
  Coeffs worst;
  SubgroupEnumerator::Visit v = [&](const Coeffs& k, const Vector&, double d) {
    ++cert.enumerated_count;
    if (k.size() > 0 && (k.array() != 0).any() && d < min_nz) {
      min_nz = d;
      worst = k;
    }
    return true;
  };
  if (!en.run(Vector::Zero(space.dim()), radius, v, max_nodes))
    throw BudgetExhausted("subgroup verify: enumeration node cap reached");
  cert.min_nonzero_norm = std::isfinite(min_nz) ? min_nz : radius;
  if (min_nz < result.theta - 1e-9) {
    std::ostringstream os;
    os << "subgroup verify: separation violated by combination " << coeffs_str(worst) << " of norm "
       << min_nz << " < theta " << result.theta;
    throw VerificationFailure(os.str());
  }
  // Coverage: every target within 1 (+ eps slack) of the subgroup.
  const double cover = 1.0 + result.eps;
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    bool hit = false;
    double best = kInf;
    SubgroupEnumerator::Visit cv = [&](const Coeffs&, const Vector&, double d) {
      best = std::min(best, d);
      hit = true;
      return false;
    };
    if (!en.run(result.targets[t], cover, cv, max_nodes))
      throw BudgetExhausted("subgroup verify: coverage query node cap reached");
    if (!hit) {
      std::ostringstream os;
      os << "subgroup verify: coverage violated at target " << t;
      throw VerificationFailure(os.str());
    }
    cert.max_target_distance = std::max(cert.max_target_distance, best);
  }
  result.verified = cert;
  return cert;
}

double gamma_star_upper_from_build(const SubgroupResult& result) {
  if (!result.verified) throw VerificationFailure("subgroup: result has not been verified");
  return 2.0 * (1.0 + result.eps) / result.theta;
}

SubgroupResult product_inf(const SubgroupResult& a, const SubgroupResult& b, int max_pairs) {
  if (!a.verified || !b.verified) throw VerificationFailure("subgroup product: inputs must be verified");
  const int na = a.space.dim(), nb = b.space.dim();
  SubgroupResult r;
  r.space = Space::direct_sum(a.space, b.space, kInf);
  r.theta = std::min(a.theta, b.theta);
  r.eps = std::max(a.eps, b.eps);
  for (const auto& g : a.generators) {
    Vector v = Vector::Zero(na + nb);
    v.head(na) = g;
    r.generators.push_back(v);
  }
  for (const auto& h : b.generators) {
    Vector v = Vector::Zero(na + nb);
    v.tail(nb) = h;
    r.generators.push_back(v);
  }
  for (const auto& u : a.targets)
    for (const auto& w : b.targets) {
      if (static_cast<int>(r.targets.size()) >= max_pairs) break;
      Vector v(na + nb);
      v << u, w;
      r.targets.push_back(v);
    }
  return r;
}

Json subgroup_to_json(const SubgroupResult& r) {
  Json j;
  j["space"] = space_to_json(r.space);
  j["generators"] = points_to_json(r.generators);
  j["theta"] = r.theta;
  j["eps"] = r.eps;
  j["targets"] = points_to_json(r.targets);
  Json log = Json::array();
  for (const auto& d : r.log)
    log.push_back({{"covered_by_existing", d.covered_by_existing},
                   {"distance", d.distance},
                   {"generator", d.generator},
                   {"heuristic", d.heuristic}});
  j["log"] = log;
  if (r.verified)
    j["verified"] = {{"radius", r.verified->radius},
                     {"enumerated_count", r.verified->enumerated_count},
                     {"min_nonzero_norm", r.verified->min_nonzero_norm},
                     {"max_target_distance", r.verified->max_target_distance}};
  else
    j["verified"] = nullptr;
  return j;
}

SubgroupResult subgroup_from_json(const Json& j) {
  try {
    SubgroupResult r;
    r.space = space_from_json(j.at("space"));
    r.generators = points_from_json(j.at("generators"));
    r.theta = j.at("theta").get<double>();
    r.eps = j.at("eps").get<double>();
    r.targets = points_from_json(j.at("targets"));
    if (j.contains("log"))
      for (const auto& d : j.at("log"))
        r.log.push_back({d.value("covered_by_existing", false), d.value("distance", 0.0),
                         d.value("generator", -1), d.value("heuristic", false)});
    // A stored certificate is not trusted; callers re-run verify.
    return r;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("subgroup json: ") + e.what());
  }
}

}  // namespace packlab
