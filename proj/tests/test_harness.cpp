#include <fstream>

#include "doctest.h"

#include "replica/errors.hpp"
#include "replica/harness.hpp"

using namespace replica;

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.kind = "bounds";
  CHECK_NOTHROW(c.validate());
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.k = 2;
  c.estimation_success = 1.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.estimation_success = 0.9;
  c.tol = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("report semantics") {
  Report r;
  r.check("a", "x", 1.0, 1.0, 0.0);
  CHECK(r.passed());
  r.check_at_least("b", "y", 0.7, 0.8, 0.0);
  CHECK_FALSE(r.passed());
  const auto j = r.to_json(false);
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][1]["status"] == "fail");
  CHECK(r.to_csv().find("b,") != std::string::npos);
}

TEST_CASE("reports are deterministic per seed") {
  ExperimentConfig c;
  c.kind = "momentpair";
  c.k = 3;
  c.seed = 7;
  CHECK(momentpair_report(c).to_json(false).dump() == momentpair_report(c).to_json(false).dump());
  ExperimentConfig s;
  s.kind = "sample";
  s.k = 2;
  s.d = 8;
  s.seed = 9;
  CHECK(sample_report(s).to_json(false).dump() == sample_report(s).to_json(false).dump());
  s.seed = 10;
  const auto a = sample_report(s).to_json(false).dump();
  s.seed = 9;
  CHECK(a != sample_report(s).to_json(false).dump());
}

TEST_CASE("a vanishing tolerance turns rounding-level checks into failures") {
  ExperimentConfig c;
  c.kind = "verify";
  c.k = 2;
  c.d = 3;
  const auto ok = verify_suite(c);
  CHECK(ok.passed());
  c.tol = 1e-30;
  const auto strict = verify_suite(c);
  CHECK_FALSE(strict.passed());
  int strict_fails = 0;
  for (const auto& ch : strict.checks) strict_fails += !ch.passed;
  CHECK(strict_fails > 0);
  CHECK(ok.checks.size() == verify_check_ids().size());
}

TEST_CASE("coverage manifest lists every verify check") {
  std::ifstream in(data_dir() + "/coverage_manifest.json");
  REQUIRE(in);
  const auto m = nlohmann::json::parse(in);
  std::vector<std::string> listed;
  for (const auto& e : m["checks"]) {
    listed.push_back(e["id"]);
    CHECK_FALSE(e["anchor"].get<std::string>().empty());
  }
  for (const auto& id : verify_check_ids())
    CHECK_MESSAGE(std::find(listed.begin(), listed.end(), id) != listed.end(), id);
}

TEST_CASE("bounds table rows") {
  ExperimentConfig c;
  c.kind = "bounds";
  const auto r = bounds_table(c);
  CHECK(r.passed());
  CHECK(r.data["table"].size() > 0);
  bool easy = false;
  for (const auto& row : r.data["table"])
    for (const auto& f : row["flags"]) easy |= f == "easy regime (moment inference)";
  CHECK(easy);
}

TEST_CASE("separation rejects dimensions outside the demonstration range") {
  ExperimentConfig c;
  c.kind = "separate";
  c.d = 8;
  CHECK_THROWS_AS(separation_experiment(c), DomainError);
}
