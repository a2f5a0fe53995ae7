#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "lwcoex/core.hpp"
#include "lwcoex/phy.hpp"

namespace lwcoex {

// --- Subframe patterns ---------------------------------------------------

// Which of the 10 subframes in a frame are mute ("L"). Subframe 0 carries
// sync/control and is never mute.
struct SubframePattern {
  std::uint16_t mute_mask = 0;

  bool is_mute(int idx) const { return (mute_mask >> idx) & 1u; }

  int mute_count() const {
    int n = 0;
    for (int i = 0; i < kSubframesPerFrame; ++i) n += is_mute(i);
    return n;
  }

  std::vector<int> mute_indices() const {
    std::vector<int> v;
    for (int i = 0; i < kSubframesPerFrame; ++i)
      if (is_mute(i)) v.push_back(i);
    return v;
  }

  static SubframePattern from_indices(std::initializer_list<int> idx) {
    SubframePattern p;
    for (int i : idx) {
      if (i < 0 || i >= kSubframesPerFrame)
        throw SimError("SubframePattern: index out of 0..9");
      if (i == 0) throw SimError("SubframePattern: subframe 0 cannot be mute");
      p.mute_mask |= static_cast<std::uint16_t>(1u << i);
    }
    return p;
  }

  friend bool operator==(const SubframePattern& a, const SubframePattern& b) {
    return a.mute_mask == b.mute_mask;
  }
};

inline int subframe_index(TimeUs t) {
  if (t < 0) throw SimError("subframe_index: negative time");
  return static_cast<int>((t / kSubframeUs) % kSubframesPerFrame);
}

inline SubframePattern pattern_from_mode(int mode) {
  switch (mode) {
    case 0: return SubframePattern::from_indices({});
    case 1: return SubframePattern::from_indices({1, 6});
    case 2: return SubframePattern::from_indices({1, 2, 6, 7});
    case 3: return SubframePattern::from_indices({1, 2, 4, 5, 6, 7});
    case 4: return SubframePattern::from_indices({1, 2, 3, 4, 5, 6, 7, 8});
    default: throw SimError("pattern_from_mode: mode out of 0..4");
  }
}

// Count-based patterns take the first k entries of a fixed precedence list.
// The list is the unique simple ordering that reproduces all the even-count
// presets above, so odd counts interleave naturally between them.
inline SubframePattern pattern_for_count(int k) {
  static constexpr std::array<int, 9> precedence = {1, 6, 2, 7, 4, 5, 3, 8, 9};
  if (k < 0 || k > 9) throw SimError("pattern_for_count: count out of 0..9");
  SubframePattern p;
  for (int i = 0; i < k; ++i)
    p.mute_mask |= static_cast<std::uint16_t>(1u << precedence[static_cast<std::size_t>(i)]);
  return p;
}

enum class SubframeAction { Transmit, Mute };

inline SubframeAction lte_subframe_action(TimeUs t, const SubframePattern& p) {
  return p.is_mute(subframe_index(t)) ? SubframeAction::Mute : SubframeAction::Transmit;
}

// --- Downlink MAC ----------------------------------------------------------

struct LtePacket {
  std::int64_t bits = 0;
  std::int64_t remaining = 0;
  TimeUs arrival = 0;
};

// One transport block in flight. Retransmissions reuse the original MCS and
// payload so chase combining is physically meaningful.
struct TransportBlock {
  int user = -1;
  int mcs = 0;
  std::int64_t payload_bits = 0;
  int completed_packets = 0;  // packets whose final segment rides in this block
  bool partial_tail = false;  // the user's head packet was consumed only partly
  HarqProcess harq;
};

// Per-subframe scheduler: one transport block per transmit subframe, users
// served round-robin, pending HARQ retransmission always first.
class LteMac {
 public:
  LteMac(int n_users, McsTable table, double bandwidth_hz, int max_retx)
      : table_(std::move(table)),
        bandwidth_hz_(bandwidth_hz),
        max_retx_(max_retx),
        queues_(static_cast<std::size_t>(n_users)) {
    if (n_users <= 0) throw SimError("LteMac: need at least one user");
    table_.validate();
  }

  int user_count() const { return static_cast<int>(queues_.size()); }

  void enqueue(int user, std::int64_t bits, TimeUs now) {
    auto& q = queues_.at(static_cast<std::size_t>(user));
    q.push_back({bits, bits, now});
    ++arrived_packets_;
    offered_bits_ += bits;
  }

  bool has_pending() const {
    if (pending_) return true;
    for (const auto& q : queues_)
      if (!q.empty()) return true;
    return false;
  }

  // Starts a transmit subframe. Returns the scheduled user, or nullopt when
  // there is nothing to send (the Pico then emits no energy). mcs_for_user
  // is consulted only when a fresh block is built.
  template <typename McsFn>
  std::optional<int> begin_subframe(McsFn&& mcs_for_user) {
    if (pending_) return pending_->user;

    const int n = user_count();
    for (int step = 0; step < n; ++step) {
      const int u = (rr_next_ + step) % n;
      auto& q = queues_[static_cast<std::size_t>(u)];
      if (q.empty()) continue;
      rr_next_ = (u + 1) % n;

      TransportBlock tb;
      tb.user = u;
      tb.mcs = mcs_for_user(u);
      tb.harq.mcs = tb.mcs;
      tb.harq.max_retx = max_retx_;
      std::int64_t capacity = transport_block_bits(table_, tb.mcs, bandwidth_hz_, kSubframeUs);

      while (capacity > 0 && !q.empty()) {
        LtePacket& head = q.front();
        const std::int64_t take = std::min(capacity, head.remaining);
        head.remaining -= take;
        tb.payload_bits += take;
        capacity -= take;
        if (head.remaining == 0) {
          ++tb.completed_packets;
          q.pop_front();
        } else {
          tb.partial_tail = true;
        }
      }
      pending_ = std::move(tb);
      return pending_->user;
    }
    return std::nullopt;
  }

  // Ends the subframe begun above with the SINR the block actually saw.
  // Returns bits credited this subframe (zero on decode failure).
  std::int64_t finish_subframe(double attempt_sinr_db) {
    if (!pending_) throw SimError("finish_subframe: no block in flight");
    TransportBlock& tb = *pending_;
    tb.harq.record_attempt(attempt_sinr_db);

    if (attempt_decode(tb.harq.effective_sinr_db(), tb.mcs, table_) == DecodeResult::Success) {
      const std::int64_t bits = tb.payload_bits;
      delivered_bits_ += bits;
      cycle_delivered_bits_ += bits;
      delivered_packets_ += tb.completed_packets;
      pending_.reset();
      return bits;
    }

    if (tb.harq.exhausted()) {
      dropped_packets_ += tb.completed_packets;
      if (tb.partial_tail) {
        // The rest of the half-sent packet is useless without this block.
        auto& q = queues_[static_cast<std::size_t>(tb.user)];
        if (!q.empty()) {
          dropped_bits_ += q.front().remaining;
          q.pop_front();
          ++dropped_packets_;
        }
      }
      dropped_bits_ += tb.payload_bits;
      pending_.reset();
    }
    return 0;
  }

  bool retransmission_pending() const { return pending_.has_value(); }
  const std::optional<TransportBlock>& pending_block() const { return pending_; }

  std::int64_t take_cycle_bits() {
    const std::int64_t b = cycle_delivered_bits_;
    cycle_delivered_bits_ = 0;
    return b;
  }

  std::int64_t delivered_bits() const { return delivered_bits_; }
  std::int64_t offered_bits() const { return offered_bits_; }
  std::int64_t dropped_bits() const { return dropped_bits_; }
  std::int64_t arrived_packets() const { return arrived_packets_; }
  std::int64_t delivered_packets() const { return delivered_packets_; }
  std::int64_t dropped_packets() const { return dropped_packets_; }

  std::int64_t queued_packets() const {
    std::int64_t n = 0;
    for (const auto& q : queues_) n += static_cast<std::int64_t>(q.size());
    return n;
  }

  std::size_t user_queue_size(int user) const {
    return queues_.at(static_cast<std::size_t>(user)).size();
  }

  // Packets fully pulled into the in-flight block; its partial tail packet
  // still sits in a queue and is counted there.
  std::int64_t in_flight_packets() const {
    return pending_ ? pending_->completed_packets : 0;
  }

  const McsTable& mcs_table() const { return table_; }

 private:
  McsTable table_;
  double bandwidth_hz_;
  int max_retx_;
  std::vector<std::deque<LtePacket>> queues_;
  int rr_next_ = 0;
  std::optional<TransportBlock> pending_;

  std::int64_t delivered_bits_ = 0;
  std::int64_t cycle_delivered_bits_ = 0;
  std::int64_t offered_bits_ = 0;
  std::int64_t dropped_bits_ = 0;
  std::int64_t arrived_packets_ = 0;
  std::int64_t delivered_packets_ = 0;
  std::int64_t dropped_packets_ = 0;
};

}  // namespace lwcoex
