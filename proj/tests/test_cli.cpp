#include <doctest.h>

#include "packlab/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace packlab;

namespace {

const std::string kDir = "cli_test_files";

int run(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(PACKLAB_CLI) + " " + args + " > " + kDir + "/stdout.txt 2> " + kDir + "/stderr.txt";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(kDir + "/stdout.txt");
    std::ostringstream os;
    os << in.rdbuf();
    *out = os.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void put(const std::string& name, const Json& j) { write_json_file(kDir + "/" + name, j); }
std::string path(const std::string& name) { return kDir + "/" + name; }

struct Files {
  Files() {
    std::filesystem::create_directories(kDir);
    put("linf2.json", {{"kind", "lp"}, {"p", "inf"}, {"n", 2}});
    put("l2_2.json", {{"kind", "lp"}, {"p", 2}, {"n", 2}});
    put("l1_32.json", {{"kind", "lp"}, {"p", 1}, {"n", 32}});
    put("2z2.json", {{"basis", {{2, 0}, {0, 2}}}});
    put("pts.json", {{3, 4}, {1, -1}});
    put("f.json", {{"cells", {"0", "10", "11"}}, {"values", {0.3, -1.2, 1.0}}});
  }
};
const Files files;

}  // namespace

TEST_CASE("gamma-star of the cube tiling") {
  std::string out;
  REQUIRE(run("gamma-star --space " + path("linf2.json") + " --lattice " + path("2z2.json"), &out) == 0);
  const auto j = Json::parse(out);
  CHECK(j["gamma_star"]["lo"].get<double>() <= 1.0);
  CHECK(j["gamma_star"]["hi"].get<double>() >= 1.0);
}

TEST_CASE("norm, tile and report commands") {
  std::string out;
  REQUIRE(run("norm --space " + path("l2_2.json") + " --points " + path("pts.json") + " --dual", &out) == 0);
  auto j = Json::parse(out);
  CHECK(j["values"][0]["norm"].get<double>() == doctest::Approx(5.0));
  CHECK(j["values"][0]["dual"].get<double>() == doctest::Approx(5.0));

  REQUIRE(run("tile round --input " + path("f.json"), &out) == 0);
  j = Json::parse(out);
  CHECK(j["values"] == Json({0.0, -2.0, 2.0}));
  CHECK(j["sup_distance"].get<double>() == 1.0);

  REQUIRE(run("report gamma2 --ms 2,4,8 --format table", &out) == 0);
  CHECK(out.find("1.414214") != std::string::npos);
  CHECK(out.find("1.681793") != std::string::npos);
  CHECK(out.find("1.834008") != std::string::npos);

  REQUIRE(run("report named --family Lp --p 1.5 --r 1", &out) == 0);
  j = Json::parse(out);
  CHECK(j["entries"][1]["value"]["lo"].get<double>() == doctest::Approx(std::cbrt(2.0)));
}

TEST_CASE("subgroup build and verify round trip") {
  REQUIRE(run("subgroup build --space " + path("l1_32.json") + " --random-targets 40,3,2 --theta 1.9 --eps 0.05 --out " +
              path("sub.json")) == 0);
  std::string out;
  REQUIRE(run("subgroup verify --result " + path("sub.json") + " --radius 1.9", &out) == 0);
  const auto j = Json::parse(out);
  CHECK(j["verified"]["min_nonzero_norm"].get<double>() >= 1.9 - 1e-9);
  CHECK(j["gamma_star_upper"].get<double>() == doctest::Approx(2 * 1.05 / 1.9));
}

TEST_CASE("exit codes") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("gamma-star --space") == 2);
  CHECK(run("gamma-star --space missing.json --lattice " + path("2z2.json")) == 3);
  put("bad_space.json", {{"kind", "lp"}, {"p", 0.5}, {"n", 2}});
  CHECK(run("norm --space " + path("bad_space.json") + " --points " + path("pts.json")) == 3);
  put("bad_result.json", {{"space", {{"kind", "lp"}, {"p", 2}, {"n", 2}}},
                          {"generators", {{1, 0}, {0.5, 0}}},
                          {"theta", 1.2},
                          {"eps", 0.1},
                          {"targets", Json::array()}});
  CHECK(run("subgroup verify --result " + path("bad_result.json") + " --radius 1.5") == 4);
  CHECK(run("suite --quick") == 0);
}

TEST_CASE("manifests reproduce output digests") {
  const std::string args = "modulus --space " + path("l2_2.json") + " --kind delta --at 0.5,1 --seed 7 --budget 200000 --out ";
  REQUIRE(run(args + path("m1.json")) == 0);
  REQUIRE(run(args + path("m2.json")) == 0);
  const auto a = read_json_file(path("m1.json.manifest.json"));
  const auto b = read_json_file(path("m2.json.manifest.json"));
  CHECK(a["outputs"].begin().value() == b["outputs"].begin().value());
  CHECK(a["seed"] == 7);
  CHECK(a["inputs"].size() == 1);
  CHECK(a["version"].get<std::string>().rfind("packlab", 0) == 0);
  CHECK(a["command_line"].size() > 3);
}
