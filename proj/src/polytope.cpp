#include "packlab/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace packlab {

namespace {

Vector canonical_sign(Vector v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

bool near(const Vector& a, const Vector& b, double tol) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol * (1.0 + a.lpNorm<Eigen::Infinity>());
}

void push_unique(std::vector<Vector>& out, const Vector& v, double tol) {
  for (const auto& w : out)
    if (near(w, v, tol)) return;
  out.push_back(v);
}

}  // namespace

double PolytopeData::gauge(const Vector& x) const {
  double best = 0.0;
  for (const auto& a : half_facets) best = std::max(best, std::abs(a.dot(x)));
  return best;
}

double PolytopeData::support(const Vector& f) const {
  double best = 0.0;
  for (const auto& v : half_vertices) best = std::max(best, std::abs(v.dot(f)));
  return best;
}

std::vector<Vector> polar_vertices(const std::vector<Vector>& points, int dim) {
  std::vector<Vector> half;
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidInput("polytope: point dimension mismatch");
    if (p.norm() == 0.0) continue;
    push_unique(half, canonical_sign(p), 1e-12);
  }
  std::vector<Vector> sym;
  sym.reserve(2 * half.size());
  for (const auto& p : half) {
    sym.push_back(p);
    sym.push_back(-p);
  }
  const int count = static_cast<int>(sym.size());
  std::vector<Vector> result;
  if (count < dim) return result;

  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  Matrix a(dim, dim);
  const Vector ones = Vector::Ones(dim);
  while (true) {
    // Skip subsets containing an antipodal pair (they span a line through 0).
    bool antipodal = false;
    for (int i = 0; i < dim && !antipodal; ++i)
      for (int j = i + 1; j < dim; ++j)
        if (idx[i] / 2 == idx[j] / 2) {
          antipodal = true;
          break;
        }
    if (!antipodal) {
      for (int i = 0; i < dim; ++i) a.row(i) = sym[idx[i]].transpose();
      Eigen::FullPivLU<Matrix> lu(a);
      if (lu.rank() == dim) {
        Vector normal = lu.solve(ones);
        bool ok = normal.allFinite();
        for (const auto& p : half) {
          if (!ok) break;
          if (std::abs(normal.dot(p)) > 1.0 + 1e-9) ok = false;
        }
        if (ok) push_unique(result, canonical_sign(normal), 1e-9);
      }
    }
    // Next combination.
    int pos = dim - 1;
    while (pos >= 0 && idx[pos] == count - dim + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < dim; ++i) idx[i] = idx[i - 1] + 1;
  }
  return result;
}

PolytopeData PolytopeData::from_vertices(const std::vector<Vector>& vertices) {
  if (vertices.empty()) throw InvalidInput("polytope: no vertices");
  const int dim = static_cast<int>(vertices.front().size());
  if (dim < 1) throw InvalidInput("polytope: zero dimension");
  // Central symmetry: every vertex needs its antipode in the list.
  for (const auto& v : vertices) {
    if (v.size() != dim) throw InvalidInput("polytope: vertex dimension mismatch");
    if (!v.allFinite()) throw InvalidInput("polytope: non-finite vertex");
    bool found = false;
    for (const auto& w : vertices)
      if (near(w, -v, 1e-9)) {
        found = true;
        break;
      }
    if (!found) throw InvalidInput("polytope: vertex set is not centrally symmetric");
  }
  Matrix span(dim, static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t j = 0; j < vertices.size(); ++j) span.col(static_cast<Eigen::Index>(j)) = vertices[j];
  if (Eigen::FullPivLU<Matrix>(span).rank() < dim)
    throw InvalidInput("polytope: vertices do not span the ambient space");

  PolytopeData out;
  out.dim = dim;
  out.half_facets = polar_vertices(vertices, dim);
  if (out.half_facets.empty()) throw InvalidInput("polytope: no facets found");
  // Keep only extreme points: those of gauge one lying on >= dim facets.
  for (const auto& v : vertices) {
    const Vector c = canonical_sign(v);
    if (std::abs(out.gauge(c) - 1.0) > 1e-9) continue;
    push_unique(out.half_vertices, c, 1e-12);
  }
  return out;
}

PolytopeData PolytopeData::from_facets(const std::vector<Vector>& facet_normals) {
  if (facet_normals.empty()) throw InvalidInput("polytope: no facets");
  const int dim = static_cast<int>(facet_normals.front().size());
  PolytopeData out;
  out.dim = dim;
  // Bounded body needs spanning normals.
  Matrix span(dim, static_cast<Eigen::Index>(facet_normals.size()));
  for (std::size_t j = 0; j < facet_normals.size(); ++j) span.col(static_cast<Eigen::Index>(j)) = facet_normals[j];
  if (Eigen::FullPivLU<Matrix>(span).rank() < dim)
    throw InvalidInput("polytope: facet normals do not span (unbounded body)");
  out.half_vertices = polar_vertices(facet_normals, dim);
  // Drop redundant constraints: a normal is a facet iff it is tight at dim
  // affinely independent vertices; polar_vertices of the vertices gives them.
  out.half_facets = polar_vertices(out.half_vertices, dim);
  return out;
}

}  // namespace packlab
