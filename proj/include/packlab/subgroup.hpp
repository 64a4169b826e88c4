#pragma once

#include "packlab/core.hpp"
#include "packlab/io.hpp"
#include "packlab/lattice_basis.hpp"
#include "packlab/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace packlab {

/// Source of unit vectors far from the unit sphere of the current subspace.
struct DirectionOracle {
  enum class Kind { FreshCoordinate, Custom };
  Kind kind = Kind::FreshCoordinate;
  int budget = 0;                  // FreshCoordinate: coordinates available (N)
  std::vector<Vector> candidates;  // Custom: unit vectors, used in order
  double declared_theta = 0.0;     // Custom

  static DirectionOracle fresh_coordinate(int n) { return {Kind::FreshCoordinate, n, {}, 0.0}; }
  static DirectionOracle custom(std::vector<Vector> c, double theta) {
    return {Kind::Custom, 0, std::move(c), theta};
  }
};

struct TargetDecision {
  bool covered_by_existing = false;
  double distance = 0.0;  // distance to the subgroup after processing
  int generator = -1;     // index of the generator added, if any
  bool heuristic = false; // closest-vector query hit its node cap
};

struct SeparationCertificate {
  double radius = 0.0;
  long enumerated_count = 0;  // subgroup elements within radius, zero included
  double min_nonzero_norm = 0.0;
  double max_target_distance = 0.0;
};

struct SubgroupResult {
  Space space = Space::lp(2, 1);
  std::vector<Vector> generators;
  double theta = 0.0;
  double eps = 0.0;
  std::vector<Vector> targets;
  std::vector<TargetDecision> log;
  std::optional<SeparationCertificate> verified;
};

/// Greedy construction: each target is either already within 1 of the
/// subgroup or contributes the generator u - x for an oracle direction x.
SubgroupResult build(const Space& space, const std::vector<Vector>& targets,
                     const DirectionOracle& oracle, double theta, double eps,
                     std::uint64_t seed = 1);

/// Exhaustive enumeration of subgroup elements of norm <= radius; throws
/// VerificationFailure on a separation or coverage violation and
/// BudgetExhausted if the node cap is hit.
SeparationCertificate verify(const Space& space, SubgroupResult& result, double radius,
                             long max_nodes = 50'000'000);

/// 2(1+eps)/theta for a verified result.
double gamma_star_upper_from_build(const SubgroupResult& result);

/// Result for X (+)_inf Y built from verified results on X and Y: generators
/// (g,0) and (0,h), theta = min, targets = Cartesian pairs (first `max_pairs`).
SubgroupResult product_inf(const SubgroupResult& a, const SubgroupResult& b, int max_pairs = 400);

/// Distance from x to the subgroup generated by `generators` (exact
/// enumeration with coordinate-projection pruning for monotone norms).
/// Sets *capped if the node cap was hit; the value is then an upper bound.
double subgroup_distance(const Space& space, const std::vector<Vector>& generators,
                         const Vector& x, long max_nodes = 1'000'000, bool* capped = nullptr);

/// `count` random integer points of the radius ball of the first `support`
/// coordinates (in the space's own norm), embedded in the space.
std::vector<Vector> integer_ball_targets(const Space& space, int count, double radius,
                                         int support, std::uint64_t seed);

Json subgroup_to_json(const SubgroupResult& r);
SubgroupResult subgroup_from_json(const Json& j);

}  // namespace packlab
