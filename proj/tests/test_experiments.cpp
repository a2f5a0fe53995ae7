#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "lwcoex/experiments.hpp"

using namespace lwcoex;

namespace {

namespace fs = std::filesystem;

RunConfig small_cfg(Experiment e) {
  RunConfig c;
  c.experiment = e;
  c.engine.duration_ms = 1000;
  c.engine.drops = 1;
  c.validate();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag)
      : path(fs::temp_directory_path() / (std::string("lwcoex_test_") + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("lambda grid matches the load sweep", "[experiments]") {
  CHECK(lambda_grid() == std::vector<double>{0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("with_run retargets kind and load only", "[experiments]") {
  RunConfig base;
  const RunConfig c = with_run(base, RunKind::Mode3, 1.5);
  CHECK(c.coex.mode == RunKind::Mode3);
  CHECK(c.lte.lambda_per_ms == 1.5);
  CHECK(c.engine.seed_base == base.engine.seed_base);
  CHECK(c.experiment == base.experiment);
}

TEST_CASE("run cache returns one aggregate per distinct config", "[experiments]") {
  RunCache cache;
  const RunConfig cfg = small_cfg(Experiment::Single);
  const Aggregate& a = cache.get(cfg);
  const Aggregate& b = cache.get(cfg);
  CHECK(&a == &b);  // cached, not re-simulated
  const Aggregate& c = cache.get(with_run(cfg, RunKind::Mode1, cfg.lte.lambda_per_ms));
  CHECK(&a != &c);
}

TEST_CASE("single experiment writes cycles, summary and manifest", "[experiments]") {
  TempDir tmp("single");
  auto cfg = small_cfg(Experiment::Single);
  cfg.output.dump_topology = true;
  const auto out = run_experiment(cfg, tmp.path.string());

  CHECK(fs::exists(tmp.path / "cycles.csv"));
  CHECK(fs::exists(tmp.path / "summary.csv"));
  CHECK(fs::exists(tmp.path / "manifest.csv"));
  CHECK(fs::exists(tmp.path / "topology.csv"));
  CHECK(out.files.size() == 4);

  const Csv cycles = read_csv((tmp.path / "cycles.csv").string());
  CHECK(cycles.header ==
        std::vector<std::string>{"cycle_index", "lte_mbps", "wlan_mbps", "spared_count", "gamma"});
  CHECK(cycles.rows.size() == 1);

  const Csv summary = read_csv((tmp.path / "summary.csv").string());
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0][0] == "0.5");  // default lambda
  CHECK(summary.rows[0][1] == "adaptive");

  const Csv topo = read_csv((tmp.path / "topology.csv").string());
  CHECK(topo.rows.size() == 23);
  CHECK(topo.rows[0][1] == "pico");

  const Csv manifest = read_csv((tmp.path / "manifest.csv").string());
  REQUIRE(manifest.rows.size() == 4);
  CHECK(manifest.rows[0][0] == "experiment");
  CHECK(manifest.rows[0][1] == "single");
  CHECK(manifest.rows[1][0] == "config_hash");
  CHECK(manifest.rows[1][1].size() == 16);  // zero-padded hex
  CHECK(manifest.rows[3][1] == kToolVersion);
}

TEST_CASE("fig2 sweeps the grid with three run kinds", "[experiments]") {
  TempDir tmp("fig2");
  run_experiment(small_cfg(Experiment::Fig2), tmp.path.string());
  const Csv s = read_csv((tmp.path / "fig2_summary.csv").string());
  REQUIRE(s.rows.size() == 12);  // 4 lambdas x {lte_only, wlan_only, adaptive}
  CHECK(s.header.front() == "lambda_l");
  int adaptive_rows = 0;
  for (const auto& r : s.rows)
    if (r[1] == "adaptive") ++adaptive_rows;
  CHECK(adaptive_rows == 4);
}

TEST_CASE("trace experiments pin their lambda", "[experiments]") {
  TempDir tmp("fig5");
  run_experiment(small_cfg(Experiment::Fig5), tmp.path.string());
  const Csv s = read_csv((tmp.path / "fig5_cycles.csv").string());
  CHECK(s.rows.size() == 1);  // one cycle at this duration
  CHECK(s.header.size() == 5);
}

TEST_CASE("fig7 compares adaptive to mode 4 on combined throughput", "[experiments]") {
  TempDir tmp("fig7");
  run_experiment(small_cfg(Experiment::Fig7), tmp.path.string());
  const Csv s = read_csv((tmp.path / "fig7_combined.csv").string());
  REQUIRE(s.rows.size() == 4);
  CHECK(s.header ==
        std::vector<std::string>{"lambda_l", "adaptive_combined_mbps", "mode4_combined_mbps"});
}

TEST_CASE("experiment outputs are deterministic files", "[experiments]") {
  TempDir ta("det_a"), tb("det_b");
  const auto cfg = small_cfg(Experiment::Single);
  run_experiment(cfg, ta.path.string());
  run_experiment(cfg, tb.path.string());
  for (const auto& name : {"cycles.csv", "summary.csv", "manifest.csv"})
    CHECK(slurp(ta.path / name) == slurp(tb.path / name));
}
