#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "otk/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = otk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("otk_cli_" + std::to_string(counter_++) + "_" +
                                         std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const json& j) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << j.dump();
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

json measure(std::vector<json> points, std::vector<double> weights) {
  return {{"points", points}, {"weights", weights}};
}

json read(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST_CASE("cli version and usage") {
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("otk 0.1.0") != std::string::npos);
  CHECK(run({"solve", "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--output", "xml", "signature", "--measure", "x.json"}).code == 2);
}

TEST_CASE("cli solve with certificate") {
  TempDir dir;
  const auto mu = dir.write("mu.json", measure({0, 1}, {0.3, 0.7}));
  const auto nu = dir.write("nu.json", measure({0, 1}, {0.6, 0.4}));
  const auto out = dir.path("plan.json");
  const auto r = run({"solve", "--mu", mu, "--nu", nu, "--cost", "sqeuclidean", "--certify", "--out", out});
  REQUIRE(r.code == 0);
  const json j = read(out);
  CHECK(j["cost"].get<double>() == doctest::Approx(0.3));
  CHECK(j["certificate"]["is_ccm"].get<bool>());
  CHECK(j["certificate"]["complete"].get<bool>());
  CHECK(j["mass"][1][0].get<double>() == doctest::Approx(0.3));

  const auto again = dir.path("plan2.json");
  REQUIRE(run({"solve", "--mu", mu, "--nu", nu, "--certify", "--out", again}).code == 0);
  std::ifstream a(out), b(again);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
}

TEST_CASE("cli solve csv") {
  TempDir dir;
  const auto mu = dir.write("mu.json", measure({0, 1}, {0.5, 0.5}));
  const auto r = run({"--output", "csv", "solve", "--mu", mu, "--nu", mu});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("src_index,tgt_index,mass\n", 0) == 0);
  CHECK(r.out.find("0,0,0.5") != std::string::npos);
  CHECK(r.out.find("1,1,0.5") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  const auto mu = dir.write("mu.json", measure({0}, {1.0}));
  const auto heavy = dir.write("heavy.json", measure({0}, {2.0}));
  CHECK(run({"solve", "--mu", mu, "--nu", heavy}).code == 1);
  CHECK(run({"solve", "--mu", mu, "--nu", dir.path("missing.json")}).code == 2);
  std::ofstream(dir.path("bad.json")) << "{not json";
  CHECK(run({"solve", "--mu", mu, "--nu", dir.path("bad.json")}).code == 2);
  const auto neg = dir.write("neg.json", measure({0}, {-1.0}));
  CHECK(run({"solve", "--mu", neg, "--nu", mu}).code == 1);
}

TEST_CASE("cli signature") {
  TempDir dir;
  const auto s = dir.write("s.json", measure({-1, 0, 2}, {2, -1, 0.5}));
  const auto r = run({"signature", "--measure", s});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["values"] == json({2.0, -1.0, 0.5}));
}

TEST_CASE("cli connect") {
  TempDir dir;
  const auto a1 = dir.write("a1.json", measure({{1, 0.5}, {-1, -0.5}}, {1, -1}));
  const auto a2 = dir.write("a2.json", measure({{-1, 0.5}, {1, -0.5}}, {1, -1}));
  const auto a3 = dir.write("a3.json", measure({{0, 1}, {0, -1}}, {1, -1}));
  const auto r12 = run({"connect", "--a", a1, "--b", a2, "--cost", "sqeuclidean", "--general"});
  REQUIRE(r12.code == 0);
  const json j12 = json::parse(r12.out);
  CHECK_FALSE(j12["connected"].get<bool>());
  CHECK(j12["reason"] == "IncompatiblePlans");
  const auto r13 = run({"connect", "--a", a1, "--b", a3, "--general"});
  REQUIRE(r13.code == 0);
  const json j13 = json::parse(r13.out);
  CHECK(j13["connected"].get<bool>());
  CHECK(j13["cost"].get<double>() == doctest::Approx(2.5));

  const auto l1 = dir.write("l1.json", measure({0, 1}, {1, -1}));
  const auto l2 = dir.write("l2.json", measure({10, 11}, {1, -1}));
  const json jl = json::parse(run({"connect", "--a", l1, "--b", l2}).out);
  CHECK(jl["connected"].get<bool>());
  CHECK(jl["cost"].get<double>() == doctest::Approx(200.0));
}

TEST_CASE("cli kernel pipeline") {
  TempDir dir;
  const json plan = {{"src_points", {0.5, 1.5}}, {"tgt_points", {1.0}}, {"mass", {{1.0}, {1.0}}}};
  const auto p = dir.write("plan.json", plan);
  const auto k = dir.path("kernel.json");
  REQUIRE(run({"kernel", "build", "--plan", p, "--out", k}).code == 0);
  const auto a = dir.write("a.json", measure({0.5, 1.5}, {1, -1}));
  const auto r = run({"kernel", "apply", "--kernel", k, "--measure", a, "--signed"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["weights"].empty());
  CHECK(j["total_integral"].get<double>() == 0.0);
  CHECK(run({"kernel", "apply", "--kernel", k, "--measure", a}).code == 1);
}

TEST_CASE("cli ccm and cost") {
  TempDir dir;
  const json anti = {{"src_points", {0, 1}}, {"tgt_points", {0, 1}}, {"mass", {{0, 0.5}, {0.5, 0}}}};
  const auto p = dir.write("anti.json", anti);
  const json r = json::parse(run({"ccm", "check", "--plan", p, "--complete"}).out);
  CHECK_FALSE(r["is_ccm"].get<bool>());
  CHECK(r["witness"]["gap"].get<double>() == doctest::Approx(2.0));
  const json c = json::parse(run({"cost", "--plan", p, "--cost", "power:1"}).out);
  CHECK(c["cost"].get<double>() == doctest::Approx(1.0));
  const json compat = json::parse(run({"ccm", "compat", "--plan1", p, "--plan2", p}).out);
  CHECK_FALSE(compat["is_ccm"].get<bool>());
}

TEST_CASE("cli tolerance from the environment") {
  TempDir dir;
  // Gap 0.02 against cycle cost 2.02: rejected at the default tolerance,
  // accepted at 0.1.
  const json plan = {{"src_points", {0, 1}}, {"tgt_points", {0, 1}}, {"mass", {{0, 0.5}, {0.5, 0}}}};
  const auto p = dir.write("p.json", plan);
  const auto t = dir.write("t.json", json{{"entries", {{1.0, 1.01}, {1.01, 1.0}}}});
  const std::string cost = "table:" + t;
  CHECK_FALSE(json::parse(run({"ccm", "check", "--plan", p, "--cost", cost}).out)["is_ccm"].get<bool>());
  ::setenv("OTK_TOL", "0.1", 1);
  CHECK(json::parse(run({"ccm", "check", "--plan", p, "--cost", cost}).out)["is_ccm"].get<bool>());
  CHECK_FALSE(
      json::parse(run({"--tol", "1e-9", "ccm", "check", "--plan", p, "--cost", cost}).out)["is_ccm"].get<bool>());
  ::unsetenv("OTK_TOL");
}
