#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lwcoex/core.hpp"

namespace lwcoex {

// --- Per-cycle and per-drop results ------------------------------------------

struct CycleRecord {
  int cycle_index = 0;
  double lte_mbps = 0.0;
  double wlan_mbps = 0.0;
  int spared_count = 0;
  double gamma = 0.0;
  // Diagnostics beyond the CSV columns; bit counts keep the totals
  // invariant integer-exact and the sensing pair feeds the accounting tests.
  std::int64_t lte_bits = 0;
  std::int64_t wlan_bits = 0;
  std::int64_t n_listen = 0;
  std::int64_t n_seize = 0;
};

struct DropResult {
  std::vector<CycleRecord> cycles;
  std::int64_t lte_bits = 0;
  std::int64_t wlan_bits = 0;
  std::uint64_t seed = 0;
  std::int64_t t_c_ms = 0;
};

// --- Core throughput arithmetic ------------------------------------------------

inline double cycle_throughput_mbps(std::int64_t delivered_bits, std::int64_t t_c_ms) {
  if (t_c_ms <= 0) throw SimError("cycle_throughput_mbps: t_c must be positive");
  return static_cast<double>(delivered_bits) / (static_cast<double>(t_c_ms) * 1000.0);
}

inline double loss_percent(double baseline, double value) {
  if (baseline <= 0) throw SimError("loss_percent: baseline must be positive");
  return (baseline - value) / baseline * 100.0;
}

inline double combined_throughput(double lte_mbps, double wlan_mbps) {
  return lte_mbps + wlan_mbps;
}

// --- Basic statistics ------------------------------------------------------------

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw SimError("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double standard_error(const std::vector<double>& v) {
  if (v.empty()) throw SimError("standard_error: empty sample");
  return sample_stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

// Kendall tau-b with tie correction; quadratic, which is fine for the
// cycle-count series it is used on.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw SimError("kendall_tau_b: need two equal-length series");
  const std::size_t n = x.size();
  std::int64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[j] - x[i];
      const double dy = y[j] - y[i];
      if (dx == 0 && dy == 0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const auto n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  const double denom =
      std::sqrt((n0 - static_cast<double>(ties_x)) * (n0 - static_cast<double>(ties_y)));
  if (denom == 0.0) return 0.0;  // a constant series carries no trend signal
  return static_cast<double>(concordant - discordant) / denom;
}

// --- Cross-drop aggregation --------------------------------------------------------

struct MeanCycle {
  int cycle_index = 0;
  double lte_mbps = 0.0;
  double wlan_mbps = 0.0;
  double spared = 0.0;
  double gamma = 0.0;
};

struct Aggregate {
  std::vector<MeanCycle> cycles;       // per-cycle-index mean across drops
  double mean_lte_mbps = 0.0;          // grand mean over drops
  double mean_wlan_mbps = 0.0;
  double mean_spared = 0.0;
  std::vector<double> drop_lte_mbps;   // one overall mean per drop, for paired stats
  std::vector<double> drop_wlan_mbps;
};

inline Aggregate aggregate_drops(const std::vector<DropResult>& drops) {
  if (drops.empty()) throw SimError("aggregate_drops: no drops");
  const std::size_t n_cycles = drops.front().cycles.size();
  const std::int64_t t_c = drops.front().t_c_ms;
  for (const auto& d : drops)
    if (d.cycles.size() != n_cycles || d.t_c_ms != t_c)
      throw SimError("aggregate_drops: mismatched cycle counts");

  Aggregate agg;
  agg.cycles.resize(n_cycles);
  for (std::size_t c = 0; c < n_cycles; ++c) agg.cycles[c].cycle_index = static_cast<int>(c);

  const auto nd = static_cast<double>(drops.size());
  for (const auto& d : drops) {
    double drop_lte = 0.0, drop_wlan = 0.0;
    for (std::size_t c = 0; c < n_cycles; ++c) {
      const CycleRecord& r = d.cycles[c];
      agg.cycles[c].lte_mbps += r.lte_mbps / nd;
      agg.cycles[c].wlan_mbps += r.wlan_mbps / nd;
      agg.cycles[c].spared += static_cast<double>(r.spared_count) / nd;
      agg.cycles[c].gamma += r.gamma / nd;
      drop_lte += r.lte_mbps;
      drop_wlan += r.wlan_mbps;
    }
    agg.drop_lte_mbps.push_back(drop_lte / static_cast<double>(n_cycles));
    agg.drop_wlan_mbps.push_back(drop_wlan / static_cast<double>(n_cycles));
  }
  agg.mean_lte_mbps = mean(agg.drop_lte_mbps);
  agg.mean_wlan_mbps = mean(agg.drop_wlan_mbps);
  double sp = 0.0;
  for (const auto& c : agg.cycles) sp += c.spared;
  agg.mean_spared = sp / static_cast<double>(n_cycles);
  return agg;
}

}  // namespace lwcoex
