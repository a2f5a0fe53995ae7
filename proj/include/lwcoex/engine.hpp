#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

#include "lwcoex/coexistence.hpp"
#include "lwcoex/config.hpp"
#include "lwcoex/core.hpp"
#include "lwcoex/geometry.hpp"
#include "lwcoex/lte_mac.hpp"
#include "lwcoex/metrics.hpp"
#include "lwcoex/phy.hpp"
#include "lwcoex/traffic.hpp"
#include "lwcoex/wlan_mac.hpp"

namespace lwcoex {

// --- Topology snapshot -------------------------------------------------------

// Node ids: 0 = Pico, 1..2 = APs, then LTE users, then WLAN users.
struct Topology {
  FloorGeometry floor;
  std::vector<NodePosition> nodes;
  int n_lte = 0;
  int n_wlan = 0;
  PathlossModel model;
  std::vector<std::vector<double>> rx_dbm;  // [tx][rx]
  std::vector<std::vector<double>> rx_mw;

  int lte_user_node(int i) const { return 3 + i; }
  int wlan_user_node(int i) const { return 3 + n_lte + i; }
};

inline Topology build_topology(const RunConfig& cfg, Rng& rng) {
  const auto& sc = cfg.scenario;
  Topology topo;
  FloorPlan plan;
  plan.rooms_per_row = sc.rooms_per_row;
  plan.room_size_m = sc.room_size_m;
  plan.corridor_width_m = sc.corridor_width_m;
  topo.floor = generate_floor(plan);
  topo.model = make_pathloss_model(topo.floor, sc.reference_loss_db, sc.distance_exponent,
                                   sc.wall_loss_db, sc.max_wall_count);
  topo.n_lte = sc.n_lte_users;
  topo.n_wlan = sc.n_wlan_users;

  topo.nodes = place_infrastructure(topo.floor, sc.min_infra_distance_m, sc.infra_height_m, rng);
  auto users = place_users(topo.floor, sc.n_lte_users, sc.n_wlan_users, sc.user_height_m, rng, 3);
  topo.nodes.insert(topo.nodes.end(), users.begin(), users.end());

  const std::size_t n = topo.nodes.size();
  topo.rx_dbm.assign(n, std::vector<double>(n, -400.0));
  topo.rx_mw.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double pl = path_loss_db(topo.nodes[a], topo.nodes[b], topo.model);
      const double rx = received_power_dbm(sc.tx_power_dbm, pl, sc.antenna_gain_db);
      topo.rx_dbm[a][b] = rx;
      topo.rx_mw[a][b] = dbm_to_mw(rx);
    }
  }
  return topo;
}

// --- Per-drop simulation ----------------------------------------------------------

class DropSim {
 public:
  DropSim(const RunConfig& cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) { init(); }

  const Topology& topology() const { return topo_; }

  DropResult run() {
    if (ran_) throw SimError("DropSim: run() is single-shot");
    ran_ = true;
    while (running_) {
      if (queue_.empty()) throw SimError("DropSim: event queue ran dry before DropEnd");
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      prune_actives();
      dispatch(ev);
    }
    DropResult out;
    out.cycles = std::move(cycles_);
    out.seed = seed_;
    out.t_c_ms = cfg_.coex.t_c_ms;
    for (const auto& c : out.cycles) {
      out.lte_bits += c.lte_bits;
      out.wlan_bits += c.wlan_bits;
    }
    if (mac_ && out.lte_bits != mac_->delivered_bits())
      throw SimError("DropSim: cycle bit totals disagree with the MAC counter");
    return out;
  }

 private:
  // Event kinds double as same-time ranks: arrivals first, then frame ends,
  // then WLAN slots, then the subframe close/open, then the cycle close.
  enum class Kind : int {
    PacketArrival = 0,
    TxEnd = 1,
    AckEnd = 2,
    WlanSlotTick = 3,
    SubframeBoundary = 4,
    CycleBoundary = 5,
    DropEnd = 6,
  };

  struct Event {
    TimeUs time = 0;
    Kind kind = Kind::DropEnd;
    std::uint64_t seq = 0;
    int a = 0;            // arrival: system; tick: ap index; tx/ack: exchange id
    std::uint64_t b = 0;  // tick generation
  };

  struct EventOrder {
    bool operator()(const Event& x, const Event& y) const {
      return std::tie(x.time, x.kind, x.seq) > std::tie(y.time, y.kind, y.seq);
    }
  };

  struct ActiveTx {
    int node = -1;
    bool wlan = false;
    TimeUs start = 0;
    TimeUs end = 0;
  };

  struct WlanExchange {
    int ap = -1;  // AP index 0/1
    int user_idx = -1;
    int user_node = -1;
    TimeUs start = 0, payload_end = 0, end = 0;
    double max_interference_mw = 0.0;
    bool overlapped = false;
    bool decode_done = false;
    bool decode_ok = false;
  };

  struct LteAttempt {
    int user_node = -1;
    double max_interference_mw = 0.0;
  };

  struct WlanLink {
    int ap = 0;
    double rate_bps = 6e6;
    double min_sinr_db = 3.0;
  };

  // --- setup -----------------------------------------------------------------

  void init() {
    kind_ = cfg_.coex.mode;
    lte_present_ = kind_ != RunKind::WlanOnly;
    wlan_present_ = kind_ != RunKind::LteOnly;
    duration_us_ = cfg_.engine.duration_ms * 1000;
    t_c_us_ = cfg_.coex.t_c_ms * 1000;
    noise_mw_ = dbm_to_mw(cfg_.scenario.noise_floor_dbm);

    Rng topo_rng(substream_seed(seed_, 0));
    topo_ = build_topology(cfg_, topo_rng);

    if (lte_present_) {
      if (topo_.n_lte < 1) throw SimError("DropSim: LTE enabled but no LTE users");
      mac_.emplace(topo_.n_lte, cfg_.lte.mcs_table, cfg_.scenario.bandwidth_hz,
                   cfg_.lte.max_retx);
      linkq_.assign(static_cast<std::size_t>(topo_.n_lte), LinkQuality{});
      if (!cfg_.lte.full_buffer && cfg_.lte.lambda_per_ms > 0) {
        lte_src_.emplace(cfg_.lte.lambda_per_ms, cfg_.lte.packet_bits,
                         substream_seed(seed_, 1));
        if (auto t = lte_src_->next(); t && *t < duration_us_)
          schedule({*t, Kind::PacketArrival, 0, 0, 0});
      }
    }

    if (wlan_present_) {
      if (topo_.n_wlan < 1) throw SimError("DropSim: WLAN enabled but no WLAN users");
      links_.resize(static_cast<std::size_t>(topo_.n_wlan));
      for (int u = 0; u < topo_.n_wlan; ++u) {
        const int un = topo_.wlan_user_node(u);
        const int ap = topo_.rx_dbm[1][un] >= topo_.rx_dbm[2][un] ? 0 : 1;
        const double free_sinr = topo_.rx_dbm[1 + ap][un] - cfg_.scenario.noise_floor_dbm;
        WlanLink link;
        link.ap = ap;
        link.rate_bps = wlan_rate_bps(free_sinr, cfg_.wlan.rate_table);
        link.min_sinr_db = cfg_.wlan.rate_table.front().min_sinr_db;
        for (const auto& e : cfg_.wlan.rate_table)
          if (free_sinr >= e.min_sinr_db) link.min_sinr_db = e.min_sinr_db;
        links_[static_cast<std::size_t>(u)] = link;
        ap_users_[ap].push_back(u);
      }
      rng_dcf_[0] = Rng(substream_seed(seed_, 3));
      rng_dcf_[1] = Rng(substream_seed(seed_, 4));
      if (!cfg_.wlan.full_buffer) {
        RampProfile ramp = cfg_.wlan.ramp;
        if (ramp.duration_ms == 0) ramp.duration_ms = cfg_.engine.duration_ms;
        wlan_src_.emplace(ramp, cfg_.wlan.payload_bits, substream_seed(seed_, 2));
        if (auto t = wlan_src_->next(); t && *t < duration_us_)
          schedule({*t, Kind::PacketArrival, 0, 1, 0});
      }
    }

    pattern_ = initial_pattern();
    if (lte_present_) schedule({0, Kind::SubframeBoundary, 0, 0, 0});
    schedule({t_c_us_, Kind::CycleBoundary, 0, 0, 0});
    schedule({duration_us_, Kind::DropEnd, 0, 0, 0});
  }

  SubframePattern initial_pattern() const {
    switch (kind_) {
      case RunKind::LteOnly:
      case RunKind::WlanOnly:
      case RunKind::Mode0: return SubframePattern{};
      case RunKind::Mode1: return pattern_from_mode(1);
      case RunKind::Mode2: return pattern_from_mode(2);
      case RunKind::Mode3: return pattern_from_mode(3);
      case RunKind::Mode4: return pattern_from_mode(4);
      case RunKind::Adaptive: return pattern_for_count(cfg_.coex.initial_spared);
    }
    throw SimError("DropSim: bad run kind");
  }

  // --- event plumbing -----------------------------------------------------------

  void schedule(Event ev) {
    ev.seq = next_seq_++;
    queue_.push(ev);
  }

  void prune_actives() {
    for (std::size_t i = actives_.size(); i-- > 0;)
      if (actives_[i].end <= now_) {
        actives_[i] = actives_.back();
        actives_.pop_back();
      }
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case Kind::PacketArrival: on_arrival(ev.a); break;
      case Kind::TxEnd: on_tx_end(ev.a); break;
      case Kind::AckEnd: on_ack_end(ev.a); break;
      case Kind::WlanSlotTick: on_tick(ev.a, ev.b); break;
      case Kind::SubframeBoundary: on_subframe_boundary(); break;
      case Kind::CycleBoundary: on_cycle_boundary(); break;
      case Kind::DropEnd: running_ = false; break;
    }
  }

  // --- power bookkeeping -----------------------------------------------------------

  // Decision-making CCA has one microsecond of detection latency: a
  // transmission that started this very instant is not seen yet, so two
  // nodes can still start in the same microsecond and collide. Interference
  // and sensing accounting use plain physical occupancy.
  std::vector<RxContribution> cca_contributions(int listener) const {
    std::vector<RxContribution> v;
    for (const auto& a : actives_)
      if (a.start < now_ && a.end > now_)
        v.push_back({topo_.rx_dbm[static_cast<std::size_t>(a.node)]
                                 [static_cast<std::size_t>(listener)],
                     a.wlan});
    return v;
  }

  double interference_mw_at(int node, int exclude_node) const {
    double sum = 0.0;
    for (const auto& a : actives_)
      if (a.node != exclude_node && a.start <= now_ && a.end > now_)
        sum += topo_.rx_mw[static_cast<std::size_t>(a.node)][static_cast<std::size_t>(node)];
    return sum;
  }

  Cca sense_at_pico() const {
    std::vector<RxContribution> v;
    for (const auto& a : actives_)
      if (a.start <= now_ && a.end > now_)
        v.push_back({topo_.rx_dbm[static_cast<std::size_t>(a.node)][0], a.wlan});
    return cca_assess(v, cfg_.phy.cca);
  }

  // Power levels change only at transmission starts, so evaluating every
  // open observation window right after each start catches every maximum.
  void add_active_tx(int node, bool wlan, TimeUs start, TimeUs end) {
    actives_.push_back({node, wlan, start, end});

    if (sensing_active_ && !seized_ && sense_at_pico() == Cca::WlanDetected) seized_ = true;

    if (lte_attempt_) {
      const double i = interference_mw_at(lte_attempt_->user_node, 0);
      lte_attempt_->max_interference_mw = std::max(lte_attempt_->max_interference_mw, i);
    }

    for (int ap = 0; ap < 2; ++ap) {
      const int ex = ap_exchange_[ap];
      if (ex < 0) continue;
      WlanExchange& e = exchanges_[static_cast<std::size_t>(ex)];
      if (e.decode_done) continue;
      const int ap_node = 1 + e.ap;
      if (wlan && node != ap_node && now_ < e.end) e.overlapped = true;
      if (now_ < e.payload_end) {
        const double i = interference_mw_at(e.user_node, ap_node);
        e.max_interference_mw = std::max(e.max_interference_mw, i);
      }
    }
  }

  // --- traffic -------------------------------------------------------------------

  void on_arrival(int system) {
    if (system == 0) {
      const int u = lte_rr_++ % topo_.n_lte;
      mac_->enqueue(u, cfg_.lte.packet_bits, now_);
      if (auto t = lte_src_->next(); t && *t < duration_us_)
        schedule({*t, Kind::PacketArrival, 0, 0, 0});
    } else {
      const int u = wlan_rr_++ % topo_.n_wlan;
      enqueue_wlan(u);
      if (auto t = wlan_src_->next(); t && *t < duration_us_)
        schedule({*t, Kind::PacketArrival, 0, 1, 0});
    }
  }

  void enqueue_wlan(int user_idx) {
    const int ap = links_[static_cast<std::size_t>(user_idx)].ap;
    WlanAp& node = aps_[ap];
    const bool was_idle = node.dcf.phase == DcfPhase::IdleNoData;
    node.enqueue({cfg_.wlan.payload_bits, now_, user_idx}, cfg_.wlan.dcf, rng_dcf_[ap]);
    if (was_idle) {
      ++tick_seq_[ap];
      schedule_tick(ap, now_ + cfg_.wlan.dcf.slot_us);
    }
  }

  void schedule_tick(int ap, TimeUs t) {
    if (t > duration_us_) return;
    schedule({t, Kind::WlanSlotTick, 0, ap, tick_seq_[ap]});
  }

  // --- WLAN ------------------------------------------------------------------------

  void on_tick(int ap, std::uint64_t gen) {
    if (gen != tick_seq_[ap]) return;  // superseded by a pause/re-arm
    WlanAp& node = aps_[ap];
    if (node.dcf.phase != DcfPhase::Difs && node.dcf.phase != DcfPhase::Backoff) return;
    const bool idle = cca_assess(cca_contributions(1 + ap), cfg_.phy.cca) == Cca::Idle;
    if (dcf_tick(node.dcf, idle, cfg_.wlan.dcf) == DcfAction::StartTx) {
      start_exchange(ap);
    } else {
      schedule_tick(ap, now_ + cfg_.wlan.dcf.slot_us);
    }
  }

  void start_exchange(int ap) {
    WlanAp& node = aps_[ap];
    const WlanPacket& pkt = node.queue.front();
    const WlanLink& link = links_[static_cast<std::size_t>(pkt.user)];
    const auto& dcf = cfg_.wlan.dcf;

    const auto payload_us = static_cast<TimeUs>(
        std::ceil(static_cast<double>(pkt.bits) * 1e6 / link.rate_bps));
    WlanExchange e;
    e.ap = ap;
    e.user_idx = pkt.user;
    e.user_node = topo_.wlan_user_node(pkt.user);
    e.start = now_;
    e.payload_end = now_ + dcf.preamble_us + payload_us;
    e.end = now_ + wlan_tx_duration(pkt.bits, link.rate_bps, dcf);

    // A frame already in the air from the other AP collides with this one;
    // the converse direction is caught by the start hook below.
    for (const auto& a : actives_)
      if (a.wlan && a.node != 1 + ap && a.end > now_) e.overlapped = true;

    const int id = static_cast<int>(exchanges_.size());
    exchanges_.push_back(e);
    ap_exchange_[ap] = id;
    ++tick_seq_[ap];  // no slot ticks while on air
    add_active_tx(1 + ap, true, e.start, e.end);
    schedule({e.payload_end, Kind::TxEnd, 0, id, 0});
    schedule({e.end, Kind::AckEnd, 0, id, 0});
  }

  void on_tx_end(int id) {
    WlanExchange& e = exchanges_[static_cast<std::size_t>(id)];
    const double signal = topo_.rx_dbm[static_cast<std::size_t>(1 + e.ap)]
                                      [static_cast<std::size_t>(e.user_node)];
    const double sinr = signal - mw_to_dbm(noise_mw_ + e.max_interference_mw);
    e.decode_ok = !e.overlapped &&
                  sinr >= links_[static_cast<std::size_t>(e.user_idx)].min_sinr_db;
    e.decode_done = true;
    aps_[e.ap].dcf.phase = DcfPhase::WaitAck;
  }

  void on_ack_end(int id) {
    WlanExchange& e = exchanges_[static_cast<std::size_t>(id)];
    WlanAp& node = aps_[e.ap];
    ap_exchange_[e.ap] = -1;
    if (e.decode_ok)
      node.complete_success(cfg_.wlan.dcf, rng_dcf_[e.ap]);
    else
      node.complete_failure(cfg_.wlan.dcf, rng_dcf_[e.ap]);

    if (cfg_.wlan.full_buffer) refill_wlan();
    if (node.has_data()) {
      arm_contention(node.dcf, cfg_.wlan.dcf, rng_dcf_[e.ap], /*redraw=*/false);
      ++tick_seq_[e.ap];
      schedule_tick(e.ap, now_ + cfg_.wlan.dcf.slot_us);
    }
  }

  void refill_wlan() {
    for (int ap = 0; ap < 2; ++ap) {
      if (ap_users_[ap].empty() || !aps_[ap].queue.empty()) continue;
      const int u = ap_users_[ap][static_cast<std::size_t>(ap_rr_[ap]++) % ap_users_[ap].size()];
      enqueue_wlan(u);
    }
  }

  // --- LTE -------------------------------------------------------------------------

  void on_subframe_boundary() {
    close_subframe();
    if (now_ >= duration_us_) return;

    for (int u = 0; u < topo_.n_lte; ++u) {
      const int un = topo_.lte_user_node(u);
      const double sinr =
          topo_.rx_dbm[0][static_cast<std::size_t>(un)] -
          mw_to_dbm(noise_mw_ + interference_mw_at(un, 0));
      auto& h = linkq_[static_cast<std::size_t>(u)];
      h.add_sample(now_, sinr);
      if (h.history.size() > 64) h.history.erase(h.history.begin(), h.history.begin() + 32);
    }

    if (cfg_.lte.full_buffer)
      for (int u = 0; u < topo_.n_lte; ++u)
        if (mac_->user_queue_size(u) == 0) mac_->enqueue(u, cfg_.lte.packet_bits, now_);
    if (wlan_present_ && cfg_.wlan.full_buffer) refill_wlan();

    // The cycle handler at this same instant has not yet swapped patterns,
    // but index 0 is transmit in every pattern, so opening first is safe.
    const int idx = subframe_index(now_);
    if (pattern_.is_mute(idx)) {
      sensing_active_ = true;
      seized_ = sense_at_pico() == Cca::WlanDetected;
    } else {
      const auto scheduled = mac_->begin_subframe([&](int u) {
        return select_mcs(linkq_[static_cast<std::size_t>(u)], cfg_.lte.mcs_table, now_);
      });
      if (scheduled) {
        LteAttempt att;
        att.user_node = topo_.lte_user_node(*scheduled);
        att.max_interference_mw = interference_mw_at(att.user_node, 0);
        lte_attempt_ = att;
        add_active_tx(0, false, now_, now_ + kSubframeUs);
      }
    }

    if (now_ + kSubframeUs <= duration_us_)
      schedule({now_ + kSubframeUs, Kind::SubframeBoundary, 0, 0, 0});
  }

  void close_subframe() {
    if (lte_attempt_) {
      const double signal =
          topo_.rx_dbm[0][static_cast<std::size_t>(lte_attempt_->user_node)];
      const double sinr = signal - mw_to_dbm(noise_mw_ + lte_attempt_->max_interference_mw);
      mac_->finish_subframe(sinr);
      lte_attempt_.reset();
    }
    if (sensing_active_) {
      record_mute_subframe(ledger_, seized_ ? Cca::WlanDetected : Cca::Idle);
      sensing_active_ = false;
      seized_ = false;
    }
  }

  // --- cycles ---------------------------------------------------------------------

  void on_cycle_boundary() {
    CycleRecord rec;
    rec.cycle_index = cycle_index_++;
    rec.lte_bits = mac_ ? mac_->take_cycle_bits() : 0;
    for (auto& ap : aps_) {
      rec.wlan_bits += ap.cycle_delivered_bits;
      ap.cycle_delivered_bits = 0;
    }
    rec.lte_mbps = cycle_throughput_mbps(rec.lte_bits, cfg_.coex.t_c_ms);
    rec.wlan_mbps = cycle_throughput_mbps(rec.wlan_bits, cfg_.coex.t_c_ms);
    rec.spared_count = lte_present_ ? pattern_.mute_count() : 0;
    rec.n_listen = ledger_.n_listen;
    rec.n_seize = ledger_.n_seize;
    rec.gamma = load_ratio(ledger_);
    cycles_.push_back(rec);

    if (kind_ == RunKind::Adaptive) {
      const CycleOutcome out = end_of_cycle(ledger_, cfg_.coex.thresholds);
      pattern_ = out.pattern;  // cycle boundaries sit on frame boundaries
    } else {
      ledger_ = SensingLedger{};
    }

    if (now_ + t_c_us_ <= duration_us_)
      schedule({now_ + t_c_us_, Kind::CycleBoundary, 0, 0, 0});
  }

  // --- members ---------------------------------------------------------------------

  RunConfig cfg_;
  std::uint64_t seed_;
  RunKind kind_ = RunKind::Adaptive;
  bool lte_present_ = false;
  bool wlan_present_ = false;
  bool ran_ = false;
  bool running_ = true;
  TimeUs duration_us_ = 0;
  TimeUs t_c_us_ = 0;
  TimeUs now_ = 0;
  double noise_mw_ = 0.0;

  Topology topo_;

  std::optional<LteMac> mac_;
  std::vector<LinkQuality> linkq_;
  std::optional<ArrivalProcess> lte_src_;
  int lte_rr_ = 0;

  std::array<WlanAp, 2> aps_;
  std::array<Rng, 2> rng_dcf_;
  std::array<std::uint64_t, 2> tick_seq_ = {0, 0};
  std::array<int, 2> ap_exchange_ = {-1, -1};
  std::array<std::vector<int>, 2> ap_users_;
  std::array<int, 2> ap_rr_ = {0, 0};
  std::vector<WlanLink> links_;
  std::optional<ArrivalProcess> wlan_src_;
  int wlan_rr_ = 0;

  SubframePattern pattern_;
  SensingLedger ledger_;
  bool sensing_active_ = false;
  bool seized_ = false;
  std::optional<LteAttempt> lte_attempt_;

  std::vector<ActiveTx> actives_;
  std::vector<WlanExchange> exchanges_;
  std::vector<CycleRecord> cycles_;
  int cycle_index_ = 0;

  std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
  std::uint64_t next_seq_ = 0;
};

inline DropResult run_drop(const RunConfig& cfg, std::uint64_t seed) {
  return DropSim(cfg, seed).run();
}

// Drops are independent realizations with per-drop seeds; order of execution
// never matters to the result.
inline std::vector<DropResult> run_drops(const RunConfig& cfg) {
  std::vector<DropResult> out;
  out.reserve(static_cast<std::size_t>(cfg.engine.drops));
  for (int i = 0; i < cfg.engine.drops; ++i)
    out.push_back(run_drop(cfg, cfg.engine.seed_base + static_cast<std::uint64_t>(i)));
  return out;
}

}  // namespace lwcoex
