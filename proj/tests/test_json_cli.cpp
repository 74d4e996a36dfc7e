#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "adhm/cli.hpp"
#include "adhm/errors.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/json_io.hpp"
#include "adhm/random.hpp"

using namespace adhm;

namespace {

std::vector<json> read_ndjson(const std::string& path) {
  std::ifstream in(path);
  std::vector<json> out;
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("matrix and datum round trips") {
  Rng rng(1);
  const CMat m = gaussian_matrix(rng, 2, 3, 1.0);
  const json j = m;
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  CHECK(j["re"][1] == m(0, 1).real());
  CHECK(j.get<CMat>() == m);

  const AdhmDatumS4 s = one_instanton(1.5);
  CHECK((json(s).get<AdhmDatumS4>() - s).norm() == 0);
  const MonadDatumP2 p = random_integrable_p2(2, 3, 4, 1.0);
  CHECK((json::parse(json(p).dump()).get<MonadDatumP2>() - p).norm() == 0);

  json bad = json(s);
  bad["k"] = 3;
  CHECK_THROWS(bad.get<AdhmDatumS4>());
}

TEST_CASE("report serialization") {
  const CheckResult f = check_c1(AdhmDatumS4::zero(2, 1));
  const json jf = f;
  CHECK(jf["verdict"] == "Fails");
  CHECK(jf["witness"].size() == 1);
  CHECK(json(CheckResult::hold())["verdict"] == "Holds");

  ChargeReport rep;
  rep.charge = 1.0;
  rep.stderr_ = 0.01;
  const json jr = rep;
  CHECK(jr["stderr"] == 0.01);
  CHECK(jr.contains("asd_max"));
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.command = "sample";
  CHECK_NOTHROW(validate(cfg));
  cfg.k = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.k = 2;
  cfg.samples = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.samples = 10;
  cfg.r = 1;
  CHECK_NOTHROW(validate(cfg));  // r < k runs through the Newton sampler
  cfg.r = 2;
  cfg.geometry = Geometry::P2;
  cfg.zeta = 1.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.zeta = 0.5;
  cfg.command = "bogus";
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.command = "field";
  CHECK_THROWS_AS(validate(cfg), ConfigError);  // field is S^4 only
  cfg.command = "resolve";
  cfg.geometry = Geometry::S4;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("run exit codes and records") {
  std::ostringstream log;
  RunConfig bad;
  bad.command = "sample";
  bad.k = 0;
  CHECK(run(bad, log) == kExitConfig);

  RunConfig cfg;
  cfg.command = "check";
  cfg.geometry = Geometry::P2;
  cfg.k = 2;
  cfg.r = 3;
  cfg.zeta = 0.5;
  cfg.samples = 4;
  cfg.out = temp_path("adhmkit_check.ndjson");
  REQUIRE(run(cfg, log) == kExitOk);
  const auto recs = read_ndjson(cfg.out);
  REQUIRE(recs.size() == 5);
  const json& summary = recs.back();
  CHECK(summary["summary"] == true);
  CHECK(summary["violations"] == 0);
  CHECK(summary["verdicts"].value("c1p_holds", 0) == 4);
  CHECK(recs[2]["index"] == 2);

  // same config, same bytes
  std::ifstream first(cfg.out);
  const std::string a((std::istreambuf_iterator<char>(first)), {});
  cfg.out = temp_path("adhmkit_check2.ndjson");
  REQUIRE(run(cfg, log) == kExitOk);
  std::ifstream second(cfg.out);
  const std::string b((std::istreambuf_iterator<char>(second)), {});
  CHECK(a == b);
}

TEST_CASE("check reads data back and flags violations") {
  std::ostringstream log;
  const std::string in = temp_path("adhmkit_input.ndjson");
  {
    std::ofstream f(in);
    MonadDatumP2 bp = MonadDatumP2::zero(1, 1);
    bp.a1(0, 0) = std::sqrt(0.5);
    bp.b(0, 0) = std::sqrt(0.5);
    f << json(bp).dump() << '\n';
  }
  RunConfig cfg;
  cfg.command = "check";
  cfg.geometry = Geometry::P2;
  cfg.zeta = -0.5;  // C2' fails at this datum, which the negative level forbids
  cfg.input = in;
  cfg.out = temp_path("adhmkit_input_out.ndjson");
  CHECK(run(cfg, log) == kExitViolation);
  const auto recs = read_ndjson(cfg.out);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["c2p"]["verdict"] == "Fails");
  CHECK(recs[0]["violation"] == true);

  cfg.zeta = 0.5;
  CHECK(run(cfg, log) == kExitOk);
}
