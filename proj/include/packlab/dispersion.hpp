#pragma once

#include "packlab/core.hpp"
#include "packlab/norms.hpp"

#include <string>
#include <vector>

namespace packlab {

struct DispersionResult {
  std::vector<Vector> points;
  double min_separation = 0.0;  // recomputed exactly from points
  std::string method;
  long iterations = 0;
};

inline constexpr int kMaxDispersionPoints = 512;

/// Best-found m-point configuration in the unit ball maximizing the minimum
/// pairwise distance. The separation is achieved, hence a lower bound.
DispersionResult max_min_separation(const Space& space, int m, const EvalBudget& budget,
                                    std::uint64_t seed, int max_points = kMaxDispersionPoints);

/// Exact minimum pairwise distance (full O(m^2) scan).
double verify_separation(const Space& space, const std::vector<Vector>& points);

/// Runs every m in `ms` and makes the results non-increasing in m by reusing
/// subsets of larger configurations.
std::vector<DispersionResult> dispersion_sweep(const Space& space, std::vector<int> ms,
                                               const EvalBudget& budget, std::uint64_t seed);

}  // namespace packlab
