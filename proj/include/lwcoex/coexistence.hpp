#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lwcoex/core.hpp"
#include "lwcoex/lte_mac.hpp"
#include "lwcoex/phy.hpp"

namespace lwcoex {

// --- Sensing ledger -------------------------------------------------------

struct SensingLedger {
  std::int64_t n_seize = 0;
  std::int64_t n_listen = 0;
};

// One entry per mute subframe. A seizure needs both detectors: channel
// energy above ED and a WLAN signal individually above CS.
inline void record_mute_subframe(SensingLedger& ledger, Cca result) {
  ++ledger.n_listen;
  if (result == Cca::WlanDetected) ++ledger.n_seize;
}

// gamma in [0,1]; a ledger that never listened reads as an empty channel.
inline double load_ratio(const SensingLedger& ledger) {
  if (ledger.n_listen == 0) return 0.0;
  return static_cast<double>(ledger.n_seize) / static_cast<double>(ledger.n_listen);
}

// --- Spared-count controller ------------------------------------------------

struct ThresholdEntry {
  double gamma_max = 0.0;
  int spared = 0;
};

struct ThresholdTable {
  std::vector<ThresholdEntry> entries;
  int overflow_spared = 9;  // gamma above every entry

  void validate() const {
    if (entries.empty()) throw SimError("ThresholdTable: empty");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].spared < 1 || entries[i].spared > 9)
        throw SimError("ThresholdTable: spared count out of 1..9");
      if (i > 0) {
        if (!(entries[i - 1].gamma_max < entries[i].gamma_max))
          throw SimError("ThresholdTable: gamma_max not strictly increasing");
        if (entries[i].spared < entries[i - 1].spared)
          throw SimError("ThresholdTable: spared counts decreasing");
      }
    }
    if (overflow_spared < entries.back().spared || overflow_spared > 9)
      throw SimError("ThresholdTable: bad overflow branch");
  }
};

// The published branch list steps gamma by 0.08 per extra spared subframe
// up to 3, then jumps to the 8-subframe branch at 0.94; the elided middle
// keeps the same 0.08 step.
inline ThresholdTable default_threshold_table() {
  ThresholdTable t;
  t.entries = {{0.08, 1}, {0.16, 2}, {0.24, 3}, {0.32, 4},
               {0.40, 5}, {0.48, 6}, {0.56, 7}, {0.94, 8}};
  t.overflow_spared = 9;
  return t;
}

inline int select_spared_count(double gamma, const ThresholdTable& table) {
  if (gamma < 0.0 || gamma > 1.0) throw SimError("select_spared_count: gamma outside [0,1]");
  for (const auto& e : table.entries)
    if (gamma <= e.gamma_max) return e.spared;
  return table.overflow_spared;
}

// --- Reallocation cycle --------------------------------------------------------

struct CycleConfig {
  std::int64_t t_c_ms = 1000;
  int initial_spared = 5;

  void validate() const {
    if (t_c_ms <= 0 || (t_c_ms * 1000) % kFrameUs != 0)
      throw SimError("CycleConfig: t_c must be a positive multiple of the 10 ms frame");
    if (initial_spared < 0 || initial_spared > 9)
      throw SimError("CycleConfig: initial_spared out of 0..9");
  }
};

struct CycleOutcome {
  double gamma = 0.0;
  int spared = 0;
  SubframePattern pattern;
};

// Closes a reallocation cycle: turns the ledger into next cycle's pattern
// and zeroes it. The caller installs the pattern at the next frame boundary.
inline CycleOutcome end_of_cycle(SensingLedger& ledger, const ThresholdTable& table) {
  CycleOutcome out;
  out.gamma = load_ratio(ledger);
  out.spared = select_spared_count(out.gamma, table);
  out.pattern = pattern_for_count(out.spared);
  ledger = SensingLedger{};
  return out;
}

}  // namespace lwcoex
