// packlab command-line front end.
#include "packlab/acceptance.hpp"
#include "packlab/bounds.hpp"
#include "packlab/dispersion.hpp"
#include "packlab/io.hpp"
#include "packlab/lattice.hpp"
#include "packlab/moduli.hpp"
#include "packlab/subgroup.hpp"
#include "packlab/suptiling.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace packlab;

namespace {

constexpr const char* kVersion = "packlab 1.0.0";

enum Exit { kOk = 0, kUsage = 2, kInput = 3, kAcceptance = 4 };

struct Common {
  std::uint64_t seed = 1;
  long budget = EvalBudget{}.max_evaluations;
  int starts = EvalBudget{}.starts;
  double mesh = 0.0;
  std::string out;
  std::string format = "json";
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(item == "inf" ? kInf : std::stod(item, &used));
      if (item != "inf" && used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

class Runner {
 public:
  Runner(int argc, char** argv) : t0_(std::chrono::steady_clock::now()) {
    for (int i = 0; i < argc; ++i) argv_.push_back(argv[i]);
  }

  Common c;

  EvalBudget budget() const { return {c.budget, c.starts}; }

  Space space(const std::string& path) {
    inputs_.push_back(path);
    return space_from_json(read_json_file(path));
  }
  Json json_input(const std::string& path) {
    inputs_.push_back(path);
    return read_json_file(path);
  }

  // Writes the result (file or stdout) and the manifest next to --out.
  void emit(const Json& result, const std::string& table) {
    const std::string text = result.dump(2) + "\n";
    if (!c.out.empty()) {
      std::ofstream(c.out, std::ios::binary) << text;
      write_manifest(text);
    }
    if (c.format == "table")
      std::cout << table;
    else if (c.out.empty())
      std::cout << text;
    else
      std::cout << "wrote " << c.out << "\n";
  }

 private:
  void write_manifest(const std::string& text) {
    Json m;
    m["command_line"] = argv_;
    m["seed"] = c.seed;
    m["budget"] = {{"max_evaluations", c.budget}, {"starts", c.starts}, {"mesh", c.mesh}};
    m["version"] = kVersion;
    m["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    Json in = Json::object();
    for (const auto& p : inputs_) in[p] = sha256_hex(slurp(p));
    m["inputs"] = in;
    m["outputs"] = {{c.out, sha256_hex(text)}};
    std::ofstream(c.out + ".manifest.json") << m.dump(2) << "\n";
  }

  std::vector<std::string> argv_;
  std::vector<std::string> inputs_;
  std::chrono::steady_clock::time_point t0_;
};

std::string interval_text(const CertifiedInterval& v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << "[" << v.lo << ", " << v.hi << "]  " << v.method;
  return os.str();
}

void add_common(CLI::App* app, Common& c, bool with_mesh = false) {
  app->add_option("--seed", c.seed, "64-bit seed");
  app->add_option("--budget", c.budget, "norm evaluations per search")->check(CLI::PositiveNumber);
  app->add_option("--starts", c.starts, "multistart count")->check(CLI::PositiveNumber);
  if (with_mesh) app->add_option("--mesh", c.mesh, "cell width in basis coordinates (0 = default)")->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "write JSON here, plus <out>.manifest.json");
  app->add_option("--format", c.format, "json or table")->check(CLI::IsMember({"json", "table"}));
}

}  // namespace

int main(int argc, char** argv) {
  Runner run(argc, argv);
  Common& c = run.c;
  CLI::App app{"Packing, covering and moduli of finite-dimensional normed spaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string space_path, lattice_path, points_path, input_path, result_path, targets_path;

  // norm
  auto* norm = app.add_subcommand("norm", "evaluate the norm (and dual norm) at points");
  norm->add_option("--space", space_path)->required();
  norm->add_option("--points", points_path, "JSON list of points")->required();
  bool dual = false;
  norm->add_flag("--dual", dual, "also evaluate the dual norm");
  add_common(norm, c);

  // modulus
  auto* modulus = app.add_subcommand("modulus", "moduli of convexity");
  std::string mkind = "delta";
  std::string at = "1";
  modulus->add_option("--space", space_path)->required();
  modulus->add_option("--kind", mkind)->check(CLI::IsMember({"delta", "tangential", "t_x", "table"}));
  modulus->add_option("--at", at, "comma-separated arguments (eps or t)");
  add_common(modulus, c);

  // dispersion
  auto* disp = app.add_subcommand("dispersion", "max-min separation of m points in the unit ball");
  std::string ms = "4";
  disp->add_option("--space", space_path)->required();
  disp->add_option("--m", ms, "comma-separated point counts");
  add_common(disp, c);

  // gamma-star
  auto* gstar = app.add_subcommand("gamma-star", "certified gamma* of a lattice");
  double gtol = 1e-3;
  gstar->add_option("--space", space_path)->required();
  gstar->add_option("--lattice", lattice_path)->required();
  gstar->add_option("--tol", gtol)->check(CLI::PositiveNumber);
  add_common(gstar, c, true);

  // optimize
  auto* optim = app.add_subcommand("optimize", "search for a lattice with small gamma*");
  OptimizeOptions oopt;
  optim->add_option("--space", space_path)->required();
  optim->add_option("--proposals", oopt.proposals)->check(CLI::PositiveNumber);
  optim->add_option("--stagnation", oopt.stagnation)->check(CLI::PositiveNumber);
  add_common(optim, c);

  // subgroup
  auto* sub = app.add_subcommand("subgroup", "separated subgroups covering a target cloud");
  sub->require_subcommand(1);
  auto* sbuild = sub->add_subcommand("build");
  double theta = 0.0, eps = 0.05;
  int fresh = 0;
  std::string random_targets;
  sbuild->add_option("--space", space_path)->required();
  auto* tgt_opt = sbuild->add_option("--targets", targets_path, "JSON list of target points");
  sbuild->add_option("--random-targets", random_targets, "count,radius,support: integer points of a ball")->excludes(tgt_opt);
  sbuild->add_option("--theta", theta, "separation (default (1-eps) 2^{1/p})");
  sbuild->add_option("--eps", eps)->check(CLI::PositiveNumber);
  sbuild->add_option("--fresh", fresh, "fresh coordinates available (default: dimension)");
  add_common(sbuild, c);
  auto* sverify = sub->add_subcommand("verify");
  double radius = 0.0;
  sverify->add_option("--result", result_path)->required();
  sverify->add_option("--radius", radius)->required();
  add_common(sverify, c);

  // tile
  auto* tile = app.add_subcommand("tile", "even-integer rounding tilings");
  tile->require_subcommand(1);
  auto* tround = tile->add_subcommand("round");
  double osc = 0.0;
  tround->add_option("--input", input_path)->required();
  tround->add_option("--osc", osc, "oscillation of f on each cell")->check(CLI::NonNegativeNumber);
  add_common(tround, c);

  // report
  auto* report = app.add_subcommand("report", "bound chains and tabulated values");
  report->require_subcommand(1);
  auto* rchain = report->add_subcommand("chain");
  double p_outer = 1.0;
  rchain->add_option("--space", space_path)->required();
  rchain->add_option("--p-outer", p_outer);
  add_common(rchain, c);
  auto* rnamed = report->add_subcommand("named");
  std::string family = "lp";
  NamedFamily nf;
  double ygs = 0.0;
  rnamed->add_option("--family", family, "lp, Lp, octahedral, ck, linf, gamma2");
  rnamed->add_option("--p", nf.p);
  rnamed->add_option("--r", nf.r);
  rnamed->add_option("--y-gamma-star", ygs, "gamma*(Y), needed for r = inf");
  add_common(rnamed, c);
  auto* rgamma2 = report->add_subcommand("gamma2");
  std::string ladder = "2,4,8,16", pk;
  double g2p = 1.0;
  rgamma2->add_option("--p", g2p);
  rgamma2->add_option("--ms", ladder);
  rgamma2->add_option("--pk", pk, "leading terms of p_k");
  add_common(rgamma2, c);

  // suite
  auto* suite = app.add_subcommand("suite", "run the acceptance battery");
  bool quick = false;
  suite->add_flag("--quick", quick, "fast criteria only");
  suite->add_option("--seed", c.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::ostringstream table;
    table << std::setprecision(10);
    if (norm->parsed()) {
      const Space s = run.space(space_path);
      const auto pts = points_from_json(run.json_input(points_path));
      Json res = {{"space", s.label()}, {"values", Json::array()}};
      for (const auto& x : pts) {
        Json e = {{"point", vector_to_json(x)}, {"norm", eval_norm(s, x)}};
        table << eval_norm(s, x);
        if (dual) {
          e["dual"] = dual_eval(s, x);
          table << "  dual " << e["dual"].get<double>();
        }
        table << "\n";
        res["values"].push_back(e);
      }
      run.emit(res, table.str());
    } else if (modulus->parsed()) {
      const Space s = run.space(space_path);
      Json res = {{"space", s.label()}, {"kind", mkind}};
      if (mkind == "t_x") {
        const auto v = t_x(s, run.budget(), c.seed);
        res["value"] = interval_to_json(v);
        table << "t_X " << interval_text(v) << "\n";
      } else if (mkind == "table") {
        const auto grid = parse_list(at);
        const auto tab = tangential_table(s, grid, run.budget(), c.seed);
        res["grid"] = grid;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          res["values"].push_back(interval_to_json(tab.values[i]));
          table << grid[i] << "  " << interval_text(tab.values[i]) << "\n";
        }
      } else {
        for (double a : parse_list(at)) {
          const auto v = mkind == "delta" ? delta(s, a, run.budget(), derive_seed(c.seed, static_cast<std::uint64_t>(a * 1e6)))
                                          : tangential(s, a, run.budget(), derive_seed(c.seed, static_cast<std::uint64_t>(a * 1e6)));
          res["values"].push_back({{"at", a}, {"value", interval_to_json(v)}});
          table << mkind << "(" << a << ") " << interval_text(v) << "\n";
        }
      }
      run.emit(res, table.str());
    } else if (disp->parsed()) {
      const Space s = run.space(space_path);
      std::vector<int> counts;
      for (double m : parse_list(ms)) {
        if (m != std::floor(m) || m < 1) throw InvalidInput("--m needs positive integers");
        counts.push_back(static_cast<int>(m));
      }
      const auto rs = dispersion_sweep(s, counts, run.budget(), c.seed);
      Json res = {{"space", s.label()}, {"results", Json::array()}};
      for (std::size_t i = 0; i < rs.size(); ++i) {
        res["results"].push_back({{"m", counts[i]},
                                  {"min_separation", rs[i].min_separation},
                                  {"method", rs[i].method},
                                  {"points", points_to_json(rs[i].points)}});
        table << "m=" << counts[i] << "  " << rs[i].min_separation << "  " << rs[i].method << "\n";
      }
      run.emit(res, table.str());
    } else if (gstar->parsed()) {
      const Space s = run.space(space_path);
      const Lattice lat = lattice_from_json(run.json_input(lattice_path));
      const auto est = gamma_star_of_lattice(s, lat, gtol, c.mesh);
      Json res = {{"space", s.label()},
                  {"packing_separation", interval_to_json(est.packing_sep)},
                  {"covering_radius", interval_to_json(est.covering)},
                  {"gamma_star", interval_to_json(est.gamma_star)}};
      table << "lambda_1  " << interval_text(est.packing_sep) << "\nmu        " << interval_text(est.covering)
            << "\ngamma*    " << interval_text(est.gamma_star) << "\n";
      run.emit(res, table.str());
    } else if (optim->parsed()) {
      const Space s = run.space(space_path);
      const auto est = optimize_lattice(s, s.dim(), c.seed, oopt);
      Json res = {{"space", s.label()},
                  {"lattice", lattice_to_json(est.lattice)},
                  {"packing_separation", interval_to_json(est.packing_sep)},
                  {"covering_radius", interval_to_json(est.covering)},
                  {"gamma_star", interval_to_json(est.gamma_star)}};
      table << "gamma*  " << interval_text(est.gamma_star) << "\n";
      run.emit(res, table.str());
    } else if (sbuild->parsed()) {
      const Space s = run.space(space_path);
      std::vector<Vector> targets;
      if (!random_targets.empty()) {
        const auto v = parse_list(random_targets);
        if (v.size() != 3) throw InvalidInput("--random-targets needs count,radius,support");
        targets = integer_ball_targets(s, static_cast<int>(v[0]), v[1], static_cast<int>(v[2]), c.seed);
      } else if (!targets_path.empty()) {
        targets = points_from_json(run.json_input(targets_path));
      } else {
        throw InvalidInput("subgroup build needs --targets or --random-targets");
      }
      const double p = s.lp_exponent();
      if (theta == 0.0) theta = (1.0 - eps) * (std::isnan(p) || std::isinf(p) ? 1.0 : std::pow(2.0, 1.0 / p));
      const auto r = build(s, targets, DirectionOracle::fresh_coordinate(fresh > 0 ? fresh : s.dim()), theta, eps, c.seed);
      const long added = std::count_if(r.log.begin(), r.log.end(), [](const auto& d) { return d.generator >= 0; });
      table << r.targets.size() << " targets, " << added << " generators, theta " << r.theta << "\n";
      run.emit(subgroup_to_json(r), table.str());
    } else if (sverify->parsed()) {
      auto r = subgroup_from_json(run.json_input(result_path));
      const auto cert = verify(r.space, r, radius);
      Json res = subgroup_to_json(r);
      res["gamma_star_upper"] = gamma_star_upper_from_build(r);
      table << "enumerated " << cert.enumerated_count << " elements, min nonzero norm >= " << cert.min_nonzero_norm
            << ", max target distance " << cert.max_target_distance << ", gamma* <= " << res["gamma_star_upper"].get<double>()
            << "\n";
      run.emit(res, table.str());
    } else if (tround->parsed()) {
      const auto f = simple_function_from_json(run.json_input(input_path));
      const auto [g, bound] = round_even_zero_dim(f, osc);
      Json res = simple_function_to_json(g);
      res["bound"] = bound;
      res["sup_distance"] = sup_distance(f, g);
      for (std::size_t i = 0; i < g.cells.size(); ++i) table << g.cells[i] << "  " << f.values[i] << " -> " << g.values[i] << "\n";
      table << "sup distance " << res["sup_distance"].get<double>() << " <= " << bound << "\n";
      run.emit(res, table.str());
    } else if (rchain->parsed()) {
      const auto rep = chain_report(run.space(space_path), p_outer, run.budget(), c.seed);
      run.emit(rep.to_json(), rep.to_table());
    } else if (rnamed->parsed()) {
      nf.kind = family_kind_from_string(family);
      if (rnamed->count("--y-gamma-star")) nf.y_gamma_star = ygs;
      const auto rep = named_gamma(nf);
      run.emit(rep.to_json(), rep.to_table());
    } else if (rgamma2->parsed()) {
      nf.kind = NamedFamily::Kind::GammaTwo;
      nf.p = g2p;
      nf.ms = parse_list(ladder);
      if (!pk.empty()) nf.pk = parse_list(pk);
      const auto rep = named_gamma(nf);
      Json res = rep.to_json();
      std::ostringstream line;
      line << std::fixed << std::setprecision(6);
      for (std::size_t i = 0; i < nf.ms.size(); ++i) line << (i ? ", " : "") << rep.entries[i].value.lo;
      res["ladder"] = line.str();
      run.emit(res, rep.to_table());
      if (c.format == "json" && c.out.empty()) std::cerr << line.str() << "\n";
    } else if (suite->parsed()) {
      const auto results = run_acceptance(quick, std::cout, c.seed);
      const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.skipped || r.pass; });
      return ok ? kOk : kAcceptance;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInput;
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInput;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kAcceptance;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
