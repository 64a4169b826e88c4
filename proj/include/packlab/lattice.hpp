#pragma once

#include "packlab/core.hpp"
#include "packlab/lattice_basis.hpp"
#include "packlab/norms.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace packlab {

/// Exact nearest-lattice-point distance for a full-rank lattice under a
/// fixed norm. The query is reduced into the centred parallelepiped of an
/// LLL basis and compared against every lattice vector that can be closest.
class NearestOracle {
 public:
  NearestOracle(const Space& space, const Lattice& lattice);
  double dist(const Vector& x) const;
  const Lattice& reduced() const { return reduced_; }
  std::size_t candidate_count() const { return cands_.size(); }

 private:
  const Space* space_;
  Lattice reduced_;
  Matrix inverse_;
  std::vector<Vector> cands_;  // sorted by Euclidean norm
  std::vector<double> cand_norm2_;
};

/// Shortest nonzero lattice vector in the norm, by Euclidean enumeration.
std::pair<Vector, double> shortest_vector(const Space& space, const Lattice& lat);

/// min over lattice points of ||x - lambda|| (x may leave the span).
double dist_to_lattice(const Space& space, const Lattice& lat, const Vector& x);

struct CoveringOptions {
  double mesh = 0.0;         // cell width in basis coordinates; 0 picks a default by dimension
  double tol = 1e-3;         // stop refining once hi - lo <= tol
  long max_cells = 400000;   // refinement budget (cell evaluations)
};

/// Certified covering radius: lo is an attained distance, hi bounds every
/// cell by centre distance plus the cell's norm radius (1-Lipschitz).
CertifiedInterval covering_radius(const Space& space, const Lattice& lat,
                                  const CoveringOptions& opt = {});

/// Same certificate for a periodic set: union of offsets + lattice.
CertifiedInterval periodic_covering_radius(const Space& space, const Lattice& lat,
                                           const std::vector<Vector>& offsets,
                                           const CoveringOptions& opt, Vector* argmax = nullptr);

struct GammaStarEstimate {
  CertifiedInterval packing_sep;  // lambda_1
  CertifiedInterval covering;     // mu
  CertifiedInterval gamma_star;   // 2 mu / lambda_1
  Lattice lattice;
};

/// gamma_tol is the requested width of the gamma* interval.
GammaStarEstimate gamma_star_of_lattice(const Space& space, const Lattice& lat,
                                        double gamma_tol = 1e-3, double mesh = 0.0,
                                        long max_cells = 400000);

struct OptimizeOptions {
  long proposals = 200000;  // cap on basis proposals
  long stagnation = 600;    // stop after this many proposals without a new best
  int certify_top = 4;      // distinct best bases certified at the end
  double gamma_tol = 1e-3;
};

/// Annealed local search over bases minimizing gamma*; deterministic in seed.
GammaStarEstimate optimize_lattice(const Space& space, int n, std::uint64_t seed,
                                   const OptimizeOptions& opt = {});

/// Gauge of the Euclidean Voronoi cell of a full-rank lattice.
double voronoi_gauge(const Lattice& lat, const Vector& x);

struct SaturationResult {
  std::vector<Vector> centers;  // offsets in the fundamental domain, including 0
  CertifiedInterval r;          // covering radius of centers + lattice
  int added = 0;
};

/// Greedy maximal 2-separated set on the torus X / base.
SaturationResult saturate_packing(const Space& space, const Lattice& base, int samples,
                                  std::uint64_t seed);

}  // namespace packlab
