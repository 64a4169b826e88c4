#pragma once

#include "packlab/core.hpp"
#include "packlab/lattice_basis.hpp"
#include "packlab/norms.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace packlab {

using Json = nlohmann::json;

/// Exponents are numbers or the string "inf".
double exponent_from_json(const Json& j);
Json exponent_to_json(double p);

Vector vector_from_json(const Json& j);
Json vector_to_json(const Vector& v);
std::vector<Vector> points_from_json(const Json& j);
Json points_to_json(const std::vector<Vector>& pts);

/// {"basis": [[...], ...]} or a bare list of basis rows.
Lattice lattice_from_json(const Json& j);
Json lattice_to_json(const Lattice& lat);

/// Space descriptors:
///   {"kind":"lp","p":2,"n":3}
///   {"kind":"weighted_lp","p":3,"weights":[1,2]}
///   {"kind":"polytope","vertices":[[...],...]}
///   {"kind":"sum","r":2,"left":{...},"right":{...}}
///   {"kind":"voronoi","lattice":{...},"base":{...}}   (base must be Euclidean)
Space space_from_json(const Json& j);
Json space_to_json(const Space& s);

Json interval_to_json(const CertifiedInterval& c);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace packlab
