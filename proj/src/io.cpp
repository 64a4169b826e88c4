#include "packlab/io.hpp"

#include <fstream>

namespace packlab {

double exponent_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
    throw InvalidInput("exponent: expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw InvalidInput("exponent: expected a number or \"inf\"");
  return j.get<double>();
}

Json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput("expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::vector<Vector> points_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected a list of points");
  std::vector<Vector> out;
  for (const auto& p : j) out.push_back(vector_from_json(p));
  return out;
}

Json points_to_json(const std::vector<Vector>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(vector_to_json(p));
  return out;
}

Lattice lattice_from_json(const Json& j) {
  const Json& rows = (j.is_object() && j.contains("basis")) ? j.at("basis") : j;
  if (!rows.is_array() || rows.empty()) throw InvalidInput("lattice: expected basis rows");
  std::vector<std::vector<double>> r;
  for (const auto& row : rows) {
    const Vector v = vector_from_json(row);
    r.emplace_back(v.data(), v.data() + v.size());
  }
  return Lattice::from_rows(r);
}

Json lattice_to_json(const Lattice& lat) {
  Json rows = Json::array();
  for (const auto& r : lat.rows()) rows.push_back(r);
  return Json{{"basis", rows}};
}

Space space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidInput("space: missing \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "lp") return Space::lp(exponent_from_json(j.at("p")), j.at("n").get<int>());
    if (kind == "weighted_lp")
      return Space::weighted_lp(exponent_from_json(j.at("p")), vector_from_json(j.at("weights")));
    if (kind == "polytope") return Space::polytope(points_from_json(j.at("vertices")));
    if (kind == "sum")
      return Space::direct_sum(space_from_json(j.at("left")), space_from_json(j.at("right")),
                               exponent_from_json(j.at("r")));
    if (kind == "voronoi") {
      const Lattice lat = lattice_from_json(j.at("lattice"));
      if (j.contains("base")) {
        const Space base = space_from_json(j.at("base"));
        if (!base.is_euclidean())
          throw Unsupported("voronoi: only a Euclidean base space is supported");
        if (base.dim() != lat.ambient_dim()) throw InvalidInput("voronoi: base dimension mismatch");
      }
      return Space::voronoi(lat);
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("space: malformed descriptor: ") + e.what());
  }
  throw InvalidInput("space: unknown kind \"" + kind + "\"");
}

Json space_to_json(const Space& s) {
  return std::visit(
      [&](const auto& k) -> Json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpKind>) {
          return Json{{"kind", "lp"}, {"p", exponent_to_json(k.p)}, {"n", k.n}};
        } else if constexpr (std::is_same_v<T, WeightedLpKind>) {
          return Json{{"kind", "weighted_lp"}, {"p", exponent_to_json(k.p)},
                      {"weights", vector_to_json(k.weights)}};
        } else if constexpr (std::is_same_v<T, PolytopeKind>) {
          std::vector<Vector> v;
          for (const auto& h : k.body->half_vertices) {
            v.push_back(h);
            v.push_back(-h);
          }
          return Json{{"kind", "polytope"}, {"vertices", points_to_json(v)}};
        } else if constexpr (std::is_same_v<T, DirectSumKind>) {
          return Json{{"kind", "sum"}, {"r", exponent_to_json(k.r)},
                      {"left", space_to_json(*k.left)}, {"right", space_to_json(*k.right)}};
        } else {
          return Json{{"kind", "voronoi"}, {"lattice", lattice_to_json(*k.lattice)},
                      {"base", Json{{"kind", "lp"}, {"p", 2}, {"n", s.dim()}}}};
        }
      },
      s.kind());
}

Json interval_to_json(const CertifiedInterval& c) {
  return Json{{"lo", c.lo}, {"hi", c.hi}, {"method", c.method}, {"evaluations", c.evaluations}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace packlab
