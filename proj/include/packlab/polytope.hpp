#pragma once

#include "packlab/core.hpp"

#include <vector>

namespace packlab {

/// A centrally symmetric convex polytope containing the origin in its
/// interior, kept in both representations. Only one member of each +/- pair
/// is stored, so gauge and support evaluations are exactly odd-symmetric.
struct PolytopeData {
  int dim = 0;
  std::vector<Vector> half_vertices;  // v and -v represented once
  std::vector<Vector> half_facets;    // a with facet {x : <a,x> = 1}, +/- once

  double gauge(const Vector& x) const;    // max_f |<a_f, x>|
  double support(const Vector& f) const;  // max_v |<f, v>|

  static PolytopeData from_vertices(const std::vector<Vector>& vertices);
  static PolytopeData from_facets(const std::vector<Vector>& facet_normals);
};

/// Vertices of the polar body of conv(+/-points): every a with <a,p> <= 1 for
/// all points and equality on n affinely independent ones. Applied to
/// vertices it returns facet normals; applied to facet normals, vertices.
/// One representative per +/- pair is returned.
std::vector<Vector> polar_vertices(const std::vector<Vector>& points, int dim);

}  // namespace packlab
