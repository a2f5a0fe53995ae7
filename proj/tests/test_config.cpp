#include <catch2/catch_amalgamated.hpp>

#include "lwcoex/config.hpp"

using namespace lwcoex;

TEST_CASE("run kind and experiment names round-trip", "[config]") {
  for (auto k : {RunKind::LteOnly, RunKind::WlanOnly, RunKind::Adaptive, RunKind::Mode0,
                 RunKind::Mode1, RunKind::Mode2, RunKind::Mode3, RunKind::Mode4})
    CHECK(run_kind_from_string(to_string(k)) == k);
  for (auto e : {Experiment::Single, Experiment::Fig2, Experiment::Fig3, Experiment::Fig4,
                 Experiment::Fig5, Experiment::Fig6, Experiment::Table34, Experiment::Fig7})
    CHECK(experiment_from_string(to_string(e)) == e);
  CHECK_THROWS_AS(run_kind_from_string("mode9"), ConfigError);
  CHECK_THROWS_AS(experiment_from_string("fig1"), ConfigError);
}

TEST_CASE("defaults validate and serialize round-trips the hash", "[config]") {
  RunConfig c;
  c.validate();
  const RunConfig back = parse_config_text(c.serialize());
  CHECK(back.hash() == c.hash());
  CHECK(back.serialize() == c.serialize());
}

TEST_CASE("config text parsing handles comments and spacing", "[config]") {
  const std::string text =
      "# full line comment\n"
      "\n"
      "experiment = fig2   # trailing comment\n"
      "  lte.lambda_per_ms=1.5\n"
      "coex.mode = mode3\n"
      "engine.seed_base = 999\n";
  const RunConfig c = parse_config_text(text);
  CHECK(c.experiment == Experiment::Fig2);
  CHECK(c.lte.lambda_per_ms == 1.5);
  CHECK(c.coex.mode == RunKind::Mode3);
  CHECK(c.engine.seed_base == 999);
}

TEST_CASE("unknown keys and bad values are named with their line", "[config]") {
  try {
    parse_config_text("experiment = single\nbogus.key = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus.key") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }

  try {
    parse_config_text("lte.packet_bits = many\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lte.packet_bits") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text("experiment\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("validation rejects inconsistent configs", "[config]") {
  RunConfig c;
  c.engine.duration_ms = 1500;  // not a multiple of t_c
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = RunConfig{};
  c.phy.cca.cs_dbm = -50.0;  // CS above ED
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = RunConfig{};
  c.coex.t_c_ms = 995;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = RunConfig{};
  c.engine.drops = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = RunConfig{};
  c.scenario.n_lte_users = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("list-valued keys parse into tables", "[config]") {
  const RunConfig c = parse_config_text(
      "lte.mcs_table = -6:0.15,0:1.0,10:2.5\n"
      "wlan.rate_table = 3:6,10:18\n"
      "coex.thresholds = 0.5:2,0.9:7\n");
  REQUIRE(c.lte.mcs_table.entries.size() == 3);
  CHECK(c.lte.mcs_table.entries[1].efficiency_bps_hz == 1.0);
  REQUIRE(c.wlan.rate_table.size() == 2);
  CHECK(c.wlan.rate_table[1].rate_bps == 18e6);
  REQUIRE(c.coex.thresholds.entries.size() == 2);
  CHECK(c.coex.thresholds.entries[1].spared == 7);
  CHECK(select_spared_count(0.95, c.coex.thresholds) == 9);

  CHECK_THROWS_AS(parse_config_text("coex.thresholds = 0.5:2,0.4:3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("lte.mcs_table = -6:0.15,banana\n"), ConfigError);
}

TEST_CASE("hash changes when any field changes", "[config]") {
  RunConfig a;
  RunConfig b;
  b.lte.lambda_per_ms = 2.0;
  RunConfig c;
  c.coex.mode = RunKind::Mode4;
  RunConfig d;
  d.engine.seed_base = 54321;
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() != d.hash());
  CHECK(a.hash() == RunConfig{}.hash());
}
