#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lwcoex/config.hpp"
#include "lwcoex/csv.hpp"
#include "lwcoex/engine.hpp"
#include "lwcoex/metrics.hpp"

namespace lwcoex {

inline constexpr const char* kToolVersion = "1.0.0";

inline const std::vector<double>& lambda_grid() {
  static const std::vector<double> g = {0.5, 1.0, 1.5, 2.0};
  return g;
}

// Several experiments share baselines (the same wlan_only run backs every
// row of the WLAN comparison); key by config hash so each distinct run is
// simulated exactly once per invocation.
class RunCache {
 public:
  const Aggregate& get(const RunConfig& cfg) {
    const std::uint64_t key = cfg.hash();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, aggregate_drops(run_drops(cfg))).first;
    return it->second;
  }

 private:
  std::map<std::uint64_t, Aggregate> cache_;
};

inline RunConfig with_run(const RunConfig& base, RunKind kind, double lambda) {
  RunConfig c = base;
  c.coex.mode = kind;
  c.lte.lambda_per_ms = lambda;
  return c;
}

// --- CSV shapes --------------------------------------------------------------

inline Csv cycles_csv(const Aggregate& agg) {
  Csv csv;
  csv.header = {"cycle_index", "lte_mbps", "wlan_mbps", "spared_count", "gamma"};
  for (const auto& c : agg.cycles)
    csv.rows.push_back({csv_cell(c.cycle_index), csv_cell(c.lte_mbps), csv_cell(c.wlan_mbps),
                        csv_cell(c.spared), csv_cell(c.gamma)});
  return csv;
}

inline std::vector<std::string> summary_row(double lambda, RunKind kind, const Aggregate& agg,
                                            const Aggregate* lte_best,
                                            const Aggregate* wlan_best) {
  double loss_lte = 0.0, loss_wlan = 0.0;
  if (kind != RunKind::LteOnly && kind != RunKind::WlanOnly) {
    if (lte_best && lte_best->mean_lte_mbps > 0)
      loss_lte = loss_percent(lte_best->mean_lte_mbps, agg.mean_lte_mbps);
    if (wlan_best && wlan_best->mean_wlan_mbps > 0)
      loss_wlan = loss_percent(wlan_best->mean_wlan_mbps, agg.mean_wlan_mbps);
  }
  return {csv_cell(lambda),           to_string(kind),         csv_cell(agg.mean_lte_mbps),
          csv_cell(agg.mean_wlan_mbps), csv_cell(loss_lte), csv_cell(loss_wlan)};
}

inline const std::vector<std::string>& summary_header() {
  static const std::vector<std::string> h = {"lambda_l",       "run_kind",
                                             "mean_lte_mbps",  "mean_wlan_mbps",
                                             "loss_lte_pct",   "loss_wlan_pct"};
  return h;
}

inline Csv topology_csv(const Topology& topo) {
  auto kind_name = [](NodeKind k) -> std::string {
    switch (k) {
      case NodeKind::Pico: return "pico";
      case NodeKind::AccessPoint: return "ap";
      case NodeKind::LteUser: return "lte_user";
      case NodeKind::WlanUser: return "wlan_user";
    }
    return "?";
  };
  Csv csv;
  csv.header = {"node_id", "kind", "x", "y", "z"};
  for (const auto& n : topo.nodes)
    csv.rows.push_back(
        {csv_cell(n.node_id), kind_name(n.kind), csv_cell(n.x), csv_cell(n.y), csv_cell(n.z)});
  return csv;
}

// --- Experiment runner ------------------------------------------------------------

struct ExperimentOutput {
  std::vector<std::string> files;
};

inline ExperimentOutput run_experiment(const RunConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunCache cache;
  ExperimentOutput out;

  auto emit = [&](const std::string& name, const Csv& csv) {
    const std::string path = (fs::path(out_dir) / name).string();
    write_csv(csv, path);
    out.files.push_back(path);
  };

  if (cfg.output.dump_topology) {
    Rng rng(substream_seed(cfg.engine.seed_base, 0));
    emit("topology.csv", topology_csv(build_topology(cfg, rng)));
  }

  switch (cfg.experiment) {
    case Experiment::Single: {
      const Aggregate& agg = cache.get(cfg);
      const Aggregate& lte_best = cache.get(with_run(cfg, RunKind::LteOnly, cfg.lte.lambda_per_ms));
      const Aggregate& wlan_best =
          cache.get(with_run(cfg, RunKind::WlanOnly, cfg.lte.lambda_per_ms));
      emit("cycles.csv", cycles_csv(agg));
      Csv s;
      s.header = summary_header();
      s.rows.push_back(summary_row(cfg.lte.lambda_per_ms, cfg.coex.mode, agg, &lte_best,
                                   &wlan_best));
      emit("summary.csv", s);
      break;
    }

    case Experiment::Fig2: {
      Csv s;
      s.header = summary_header();
      for (double lambda : lambda_grid()) {
        const Aggregate& lte_best = cache.get(with_run(cfg, RunKind::LteOnly, lambda));
        const Aggregate& wlan_best = cache.get(with_run(cfg, RunKind::WlanOnly, lambda));
        const Aggregate& adaptive = cache.get(with_run(cfg, RunKind::Adaptive, lambda));
        s.rows.push_back(summary_row(lambda, RunKind::LteOnly, lte_best, nullptr, nullptr));
        s.rows.push_back(summary_row(lambda, RunKind::WlanOnly, wlan_best, nullptr, nullptr));
        s.rows.push_back(
            summary_row(lambda, RunKind::Adaptive, adaptive, &lte_best, &wlan_best));
      }
      emit("fig2_summary.csv", s);
      break;
    }

    case Experiment::Fig3:
    case Experiment::Fig4:
    case Experiment::Fig5:
    case Experiment::Fig6: {
      const int idx = static_cast<int>(cfg.experiment) - static_cast<int>(Experiment::Fig3);
      const double lambda = lambda_grid()[static_cast<std::size_t>(idx)];
      const Aggregate& agg = cache.get(with_run(cfg, RunKind::Adaptive, lambda));
      emit(to_string(cfg.experiment) + "_cycles.csv", cycles_csv(agg));
      break;
    }

    case Experiment::Table34: {
      static const RunKind cols[] = {RunKind::Adaptive, RunKind::Mode1, RunKind::Mode2,
                                     RunKind::Mode3, RunKind::Mode4};
      Csv wlan_table, lte_table;
      wlan_table.header = {"lambda_l", "best", "adaptive", "mode1", "mode2", "mode3", "mode4"};
      lte_table.header = wlan_table.header;
      for (double lambda : lambda_grid()) {
        std::vector<std::string> wrow{csv_cell(lambda)};
        std::vector<std::string> lrow{csv_cell(lambda)};
        wrow.push_back(csv_cell(cache.get(with_run(cfg, RunKind::WlanOnly, lambda)).mean_wlan_mbps));
        lrow.push_back(csv_cell(cache.get(with_run(cfg, RunKind::LteOnly, lambda)).mean_lte_mbps));
        for (RunKind k : cols) {
          const Aggregate& agg = cache.get(with_run(cfg, k, lambda));
          wrow.push_back(csv_cell(agg.mean_wlan_mbps));
          lrow.push_back(csv_cell(agg.mean_lte_mbps));
        }
        wlan_table.rows.push_back(std::move(wrow));
        lte_table.rows.push_back(std::move(lrow));
      }
      emit("table3_wlan.csv", wlan_table);
      emit("table4_lte.csv", lte_table);
      break;
    }

    case Experiment::Fig7: {
      Csv s;
      s.header = {"lambda_l", "adaptive_combined_mbps", "mode4_combined_mbps"};
      for (double lambda : lambda_grid()) {
        const Aggregate& adaptive = cache.get(with_run(cfg, RunKind::Adaptive, lambda));
        const Aggregate& mode4 = cache.get(with_run(cfg, RunKind::Mode4, lambda));
        s.rows.push_back(
            {csv_cell(lambda),
             csv_cell(combined_throughput(adaptive.mean_lte_mbps, adaptive.mean_wlan_mbps)),
             csv_cell(combined_throughput(mode4.mean_lte_mbps, mode4.mean_wlan_mbps))});
      }
      emit("fig7_combined.csv", s);
      break;
    }
  }

  // Sidecar manifest: enough to reproduce and to recognize a rerun.
  {
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    Csv manifest;
    manifest.header = {"key", "value"};
    manifest.rows = {{"experiment", to_string(cfg.experiment)},
                     {"config_hash", hash_hex},
                     {"seed_base", std::to_string(cfg.engine.seed_base)},
                     {"version", kToolVersion}};
    const std::string path = (std::filesystem::path(out_dir) / "manifest.csv").string();
    write_csv(manifest, path);
    out.files.push_back(path);
  }
  return out;
}

}  // namespace lwcoex
