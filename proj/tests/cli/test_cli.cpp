#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "experiment.hpp"

using namespace feec::cli;
using nlohmann::json;

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.k = 1;
  c.patch = "left,right";
  c.density_epsilons = {0.1, 0.05};
  const json doc = c.to_json();
  const ExperimentConfig back = ExperimentConfig::from_json(doc);
  CHECK(back.to_json() == doc);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"colour", 1}}), ConfigError);
  CHECK_NOTHROW(ExperimentConfig::from_json(json{{"schema", 1}}));
  ExperimentConfig c;
  c.k = 7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.density_epsilons = {0.1, 0.2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("betti report of opposite faces") {
  ExperimentConfig c;
  c.mesh.divisions = 4;
  c.patch = "left,right";
  const CommandResult r = run_guarded("betti", c, cmd_betti);
  CHECK(r.exit_code == 0);
  CHECK(r.report["schema"] == 1);
  CHECK(r.report["result"]["b"] == json::array({0, 1, 0}));
}

TEST_CASE("bad patch is a config error") {
  ExperimentConfig c;
  c.mesh.divisions = 4;
  c.patch = "sideways";
  const CommandResult r = run_guarded("betti", c, cmd_betti);
  CHECK(r.exit_code == 2);
  CHECK(r.report.contains("error"));
}

TEST_CASE("converge emits a csv table") {
  ExperimentConfig c;
  c.mesh.divisions = 4;
  c.patch = "all";
  c.levels = 3;
  const CommandResult r = run_guarded("converge", c, cmd_converge);
  CHECK(r.csv.rfind("level,h,l2_error,hd_error,l2_rate,hd_rate\n", 0) == 0);
}
