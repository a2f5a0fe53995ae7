#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lwcoex/core.hpp"

namespace lwcoex {

// --- CCA ---------------------------------------------------------------

enum class Cca { Idle, EnergyBusy, WlanDetected };

inline bool cca_busy(Cca c) { return c != Cca::Idle; }

struct CcaThresholds {
  double ed_dbm = -62.0;
  double cs_dbm = -82.0;
};

struct RxContribution {
  double rx_dbm = -300.0;
  bool from_wlan = false;
};

// ED looks at total energy; CS looks for an individually decodable WLAN
// signal. WlanDetected requires both detectors to fire, which is exactly
// the seizure condition the sensing ledger wants. A WLAN preamble above CS
// with total energy still under ED reports EnergyBusy: the channel is not
// idle, but it does not count as a seizure.
inline Cca cca_assess(const std::vector<RxContribution>& active, const CcaThresholds& th) {
  double total_mw = 0.0;
  bool wlan_cs = false;
  for (const auto& c : active) {
    total_mw += dbm_to_mw(c.rx_dbm);
    if (c.from_wlan && c.rx_dbm >= th.cs_dbm) wlan_cs = true;
  }
  const bool energy = total_mw > 0.0 && mw_to_dbm(total_mw) >= th.ed_dbm;
  if (energy && wlan_cs) return Cca::WlanDetected;
  if (energy || wlan_cs) return Cca::EnergyBusy;
  return Cca::Idle;
}

// --- SINR --------------------------------------------------------------

inline double sinr_db(double signal_dbm, const std::vector<double>& interferers_dbm,
                      double noise_dbm) {
  double denom_mw = dbm_to_mw(noise_dbm);
  for (double i : interferers_dbm) denom_mw += dbm_to_mw(i);
  return signal_dbm - mw_to_dbm(denom_mw);
}

inline double sinr_db_from_mw(double signal_dbm, double interference_mw, double noise_dbm) {
  return signal_dbm - mw_to_dbm(dbm_to_mw(noise_dbm) + interference_mw);
}

// --- MCS ---------------------------------------------------------------

struct McsEntry {
  double min_sinr_db = 0.0;
  double efficiency_bps_hz = 0.0;
};

struct McsTable {
  std::vector<McsEntry> entries;

  void validate() const {
    if (entries.empty()) throw SimError("McsTable: empty");
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (!(entries[i - 1].min_sinr_db < entries[i].min_sinr_db))
        throw SimError("McsTable: min_sinr not strictly increasing");
      if (entries[i].efficiency_bps_hz < entries[i - 1].efficiency_bps_hz)
        throw SimError("McsTable: efficiency decreasing");
    }
  }
};

// CQI-style 15-entry ladder, thresholds every 2 dB from -6 to 22.
inline McsTable default_mcs_table() {
  static const double eff[15] = {0.15, 0.23, 0.38, 0.60, 0.88, 1.18, 1.48, 1.91,
                                 2.41, 2.73, 3.32, 3.90, 4.52, 5.12, 5.55};
  McsTable t;
  t.entries.reserve(15);
  for (int i = 0; i < 15; ++i) t.entries.push_back({-6.0 + 2.0 * i, eff[i]});
  return t;
}

// Highest index whose threshold the sample meets; below the whole table
// (or with no usable sample) the lowest MCS is used.
inline int select_mcs_for_sinr(const McsTable& table, double sinr_db_value) {
  int best = 0;
  for (std::size_t i = 0; i < table.entries.size(); ++i)
    if (sinr_db_value >= table.entries[i].min_sinr_db) best = static_cast<int>(i);
  return best;
}

inline std::int64_t transport_block_bits(const McsTable& table, int mcs, double bandwidth_hz,
                                         TimeUs duration_us) {
  if (mcs < 0 || mcs >= static_cast<int>(table.entries.size()))
    throw SimError("transport_block_bits: mcs index out of range");
  const double bits =
      table.entries[static_cast<std::size_t>(mcs)].efficiency_bps_hz * bandwidth_hz *
      (static_cast<double>(duration_us) * 1e-6);
  return std::llround(bits);
}

// --- Link quality (lagged SINR history) ---------------------------------

struct SinrSample {
  TimeUs t = 0;
  double sinr_db = 0.0;
};

struct LinkQuality {
  std::vector<SinrSample> history;

  void add_sample(TimeUs t, double s) {
    if (!history.empty() && t <= history.back().t)
      throw SimError("LinkQuality: sample timestamps must strictly increase");
    history.push_back({t, s});
  }

  std::optional<double> sample_at_or_before(TimeUs t) const {
    // History grows at the tail, so scan backwards; the hit is almost
    // always within the last couple of entries.
    for (auto it = history.rbegin(); it != history.rend(); ++it)
      if (it->t <= t) return it->sinr_db;
    return std::nullopt;
  }
};

constexpr TimeUs kMcsLagUs = 2000;

inline int select_mcs(const LinkQuality& q, const McsTable& table, TimeUs now,
                      TimeUs lag_us = kMcsLagUs) {
  const auto s = q.sample_at_or_before(now - lag_us);
  if (!s) return 0;
  return select_mcs_for_sinr(table, *s);
}

// --- HARQ ----------------------------------------------------------------

inline double chase_combine(const std::vector<double>& attempts_db) {
  if (attempts_db.empty()) throw SimError("chase_combine: no attempts");
  double sum_linear = 0.0;
  for (double a : attempts_db) sum_linear += db_to_linear(a);
  return linear_to_db(sum_linear);
}

enum class DecodeResult { Success, Failure };

inline DecodeResult attempt_decode(double effective_sinr_db, int mcs, const McsTable& table) {
  if (mcs < 0 || mcs >= static_cast<int>(table.entries.size()))
    throw SimError("attempt_decode: mcs index out of range");
  return effective_sinr_db >= table.entries[static_cast<std::size_t>(mcs)].min_sinr_db
             ? DecodeResult::Success
             : DecodeResult::Failure;
}

struct HarqProcess {
  int mcs = 0;
  int max_retx = 3;
  std::vector<double> attempt_sinrs_db;

  int attempts() const { return static_cast<int>(attempt_sinrs_db.size()); }
  bool exhausted() const { return attempts() >= 1 + max_retx; }

  void record_attempt(double sinr) {
    if (exhausted()) throw SimError("HarqProcess: attempt after exhaustion");
    attempt_sinrs_db.push_back(sinr);
  }

  double effective_sinr_db() const { return chase_combine(attempt_sinrs_db); }
};

}  // namespace lwcoex
