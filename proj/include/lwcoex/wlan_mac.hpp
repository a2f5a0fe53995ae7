#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "lwcoex/core.hpp"

namespace lwcoex {

// --- DCF parameters --------------------------------------------------------

struct DcfParams {
  TimeUs slot_us = 9;
  TimeUs difs_us = 34;
  TimeUs sifs_us = 16;
  TimeUs ack_us = 44;
  TimeUs preamble_us = 20;
  int cw_min = 15;
  int cw_max = 1023;
  int max_backoff_level = 6;
  int retry_limit = 7;  // frame discarded after this many failed attempts

  void validate() const {
    if (slot_us <= 0 || difs_us <= 0 || sifs_us <= 0 || ack_us <= 0)
      throw SimError("DcfParams: durations must be positive");
    if (cw_min > cw_max) throw SimError("DcfParams: cw_min > cw_max");
    if (max_backoff_level < 0 || retry_limit < 1)
      throw SimError("DcfParams: bad retry settings");
  }

  // DIFS expressed in whole backoff slots, rounded up; the state machine is
  // slot-granular.
  int difs_slots() const {
    return static_cast<int>((difs_us + slot_us - 1) / slot_us);
  }
};

inline int contention_window(int level, const DcfParams& p) {
  if (level < 0) throw SimError("contention_window: negative level");
  const int capped = std::min(level, p.max_backoff_level);
  const std::int64_t w = (static_cast<std::int64_t>(p.cw_min) + 1) * (1ll << capped) - 1;
  return static_cast<int>(std::min<std::int64_t>(w, p.cw_max));
}

inline int draw_backoff(int level, const DcfParams& p, Rng& rng) {
  return static_cast<int>(rng.uniform_int(0, contention_window(level, p)));
}

// --- DCF state machine ------------------------------------------------------

enum class DcfPhase { IdleNoData, Difs, Backoff, Transmitting, WaitAck };

enum class DcfAction { None, StartTx };

struct DcfState {
  DcfPhase phase = DcfPhase::IdleNoData;
  int backoff_level = 0;
  int backoff_counter = 0;
  int difs_remaining = 0;

  // Every counter decrement lands here; an outside observer counting idle
  // backoff slots must arrive at the same number.
  std::int64_t total_decrements = 0;
};

// One backoff slot. Busy slots freeze the counter and re-arm DIFS; idle
// slots burn down DIFS first, then the counter. A counter already at zero
// fires immediately on an idle slot.
inline DcfAction dcf_tick(DcfState& s, bool channel_idle, const DcfParams& p) {
  if (s.phase != DcfPhase::Difs && s.phase != DcfPhase::Backoff)
    throw SimError("dcf_tick: node is not contending");

  if (!channel_idle) {
    s.phase = DcfPhase::Difs;
    s.difs_remaining = p.difs_slots();
    return DcfAction::None;
  }

  if (s.phase == DcfPhase::Difs) {
    if (--s.difs_remaining <= 0) s.phase = DcfPhase::Backoff;
    return DcfAction::None;
  }

  if (s.backoff_counter > 0) {
    --s.backoff_counter;
    ++s.total_decrements;
  }
  if (s.backoff_counter == 0) {
    s.phase = DcfPhase::Transmitting;
    return DcfAction::StartTx;
  }
  return DcfAction::None;
}

inline void arm_contention(DcfState& s, const DcfParams& p, Rng& rng, bool redraw) {
  s.phase = DcfPhase::Difs;
  s.difs_remaining = p.difs_slots();
  if (redraw) s.backoff_counter = draw_backoff(s.backoff_level, p, rng);
}

inline void on_collision(DcfState& s, const DcfParams& p, Rng& rng) {
  s.backoff_level = std::min(s.backoff_level + 1, p.max_backoff_level);
  s.backoff_counter = draw_backoff(s.backoff_level, p, rng);
  s.phase = DcfPhase::Backoff;
}

inline void on_success(DcfState& s, const DcfParams& p, Rng& rng) {
  s.backoff_level = 0;
  s.backoff_counter = draw_backoff(0, p, rng);
  s.phase = DcfPhase::Backoff;
}

// --- Frame timing ------------------------------------------------------------

// Airtime of one full exchange: payload at the PHY rate, plus preamble,
// SIFS and the ACK.
inline TimeUs wlan_tx_duration(std::int64_t payload_bits, double phy_rate_bps,
                               const DcfParams& p) {
  if (phy_rate_bps <= 0) throw SimError("wlan_tx_duration: rate must be positive");
  const auto payload_us = static_cast<TimeUs>(
      std::ceil(static_cast<double>(payload_bits) * 1e6 / phy_rate_bps));
  return payload_us + p.preamble_us + p.sifs_us + p.ack_us;
}

// --- Static per-link rate ------------------------------------------------------

struct WlanRateEntry {
  double min_sinr_db = 0.0;
  double rate_bps = 0.0;
};

// 6..54 Mb/s OFDM ladder; links below the lowest step still associate at
// the base rate.
inline std::vector<WlanRateEntry> default_wlan_rate_table() {
  return {{3, 6e6}, {5, 9e6}, {7, 12e6}, {10, 18e6},
          {13, 24e6}, {17, 36e6}, {21, 48e6}, {23, 54e6}};
}

inline double wlan_rate_bps(double sinr_db, const std::vector<WlanRateEntry>& table) {
  if (table.empty()) throw SimError("wlan_rate_bps: empty table");
  double rate = table.front().rate_bps;
  for (const auto& e : table)
    if (sinr_db >= e.min_sinr_db) rate = e.rate_bps;
  return rate;
}

// --- Per-AP transmit queue ------------------------------------------------------

struct WlanPacket {
  std::int64_t bits = 0;
  TimeUs arrival = 0;
  int user = -1;
};

// Everything one AP needs besides its position: DCF state, FIFO of frames,
// retry count of the head frame, delivery counters.
struct WlanAp {
  DcfState dcf;
  std::deque<WlanPacket> queue;
  int head_retries = 0;

  std::int64_t delivered_bits = 0;
  std::int64_t cycle_delivered_bits = 0;
  std::int64_t offered_bits = 0;
  std::int64_t arrived_packets = 0;
  std::int64_t delivered_packets = 0;
  std::int64_t dropped_packets = 0;

  bool has_data() const { return !queue.empty(); }

  void enqueue(WlanPacket pkt, const DcfParams& p, Rng& rng) {
    offered_bits += pkt.bits;
    ++arrived_packets;
    queue.push_back(pkt);
    if (dcf.phase == DcfPhase::IdleNoData) arm_contention(dcf, p, rng, /*redraw=*/true);
  }

  void complete_success(const DcfParams& p, Rng& rng) {
    const WlanPacket pkt = queue.front();
    queue.pop_front();
    delivered_bits += pkt.bits;
    cycle_delivered_bits += pkt.bits;
    ++delivered_packets;
    head_retries = 0;
    on_success(dcf, p, rng);
    if (queue.empty()) dcf.phase = DcfPhase::IdleNoData;
  }

  void complete_failure(const DcfParams& p, Rng& rng) {
    ++head_retries;
    if (head_retries >= p.retry_limit) {
      queue.pop_front();
      ++dropped_packets;
      head_retries = 0;
      dcf.backoff_level = 0;
      dcf.backoff_counter = draw_backoff(0, p, rng);
      dcf.phase = queue.empty() ? DcfPhase::IdleNoData : DcfPhase::Backoff;
      return;
    }
    on_collision(dcf, p, rng);
  }
};

}  // namespace lwcoex
