#include <catch2/catch_amalgamated.hpp>

#include "lwcoex/wlan_mac.hpp"

using namespace lwcoex;

TEST_CASE("contention window doubles and saturates", "[wlan_mac]") {
  const DcfParams p;
  const int expected[] = {15, 31, 63, 127, 255, 511, 1023};
  for (int level = 0; level <= 6; ++level) CHECK(contention_window(level, p) == expected[level]);
  CHECK(contention_window(12, p) == 1023);  // level capped before use

  DcfParams small;
  small.cw_min = 15;
  small.cw_max = 100;
  CHECK(contention_window(3, small) == 100);
}

TEST_CASE("difs spans four 9 us slots", "[wlan_mac]") {
  const DcfParams p;
  CHECK(p.difs_slots() == 4);
  p.validate();
  DcfParams bad;
  bad.slot_us = 0;
  CHECK_THROWS_AS(bad.validate(), SimError);
  bad = DcfParams{};
  bad.cw_max = 7;  // below cw_min
  CHECK_THROWS_AS(bad.validate(), SimError);
}

TEST_CASE("backoff draws stay within the window", "[wlan_mac]") {
  const DcfParams p;
  Rng rng(3);
  for (int level = 0; level <= 6; ++level) {
    const int cw = contention_window(level, p);
    for (int i = 0; i < 200; ++i) {
      const int b = draw_backoff(level, p, rng);
      REQUIRE(b >= 0);
      REQUIRE(b <= cw);
    }
  }
}

TEST_CASE("a scripted contention runs difs then counts down", "[wlan_mac]") {
  const DcfParams p;
  Rng rng(8);
  DcfState s;
  CHECK_THROWS_AS(dcf_tick(s, true, p), SimError);  // not contending yet

  arm_contention(s, p, rng, true);
  while (s.backoff_counter < 1) arm_contention(s, p, rng, true);  // need a real countdown
  CHECK(s.phase == DcfPhase::Difs);
  const int drawn = s.backoff_counter;

  for (int i = 0; i < 4; ++i) {
    CHECK(dcf_tick(s, true, p) == DcfAction::None);
  }
  CHECK(s.phase == DcfPhase::Backoff);
  CHECK(s.backoff_counter == drawn);  // DIFS must not consume backoff

  // A busy slot freezes the counter and re-arms DIFS.
  CHECK(dcf_tick(s, false, p) == DcfAction::None);
  CHECK(s.phase == DcfPhase::Difs);
  CHECK(s.backoff_counter == drawn);
  for (int i = 0; i < 4; ++i) dcf_tick(s, true, p);
  CHECK(s.phase == DcfPhase::Backoff);

  for (int i = 0; i < drawn - 1; ++i) {
    CHECK(dcf_tick(s, true, p) == DcfAction::None);
  }
  CHECK(s.backoff_counter == 1);
  CHECK(dcf_tick(s, true, p) == DcfAction::StartTx);
  CHECK(s.phase == DcfPhase::Transmitting);
  CHECK(s.total_decrements == drawn);
}

TEST_CASE("zero backoff fires on the first post-difs idle slot", "[wlan_mac]") {
  const DcfParams p;
  DcfState s;
  s.phase = DcfPhase::Difs;
  s.difs_remaining = 1;
  s.backoff_counter = 0;
  CHECK(dcf_tick(s, true, p) == DcfAction::None);  // difs completes
  CHECK(dcf_tick(s, true, p) == DcfAction::StartTx);
  CHECK(s.total_decrements == 0);
}

TEST_CASE("collision escalates the level, success resets it", "[wlan_mac]") {
  const DcfParams p;
  Rng rng(9);
  DcfState s;
  for (int i = 0; i < 10; ++i) on_collision(s, p, rng);
  CHECK(s.backoff_level == p.max_backoff_level);
  CHECK(s.backoff_counter <= 1023);
  on_success(s, p, rng);
  CHECK(s.backoff_level == 0);
  CHECK(s.backoff_counter <= 15);
  CHECK(s.phase == DcfPhase::Backoff);
}

TEST_CASE("exchange airtime includes preamble, sifs and ack", "[wlan_mac]") {
  const DcfParams p;
  CHECK(wlan_tx_duration(12000, 24e6, p) == 500 + 20 + 16 + 44);
  CHECK(wlan_tx_duration(12000, 54e6, p) == 223 + 20 + 16 + 44);  // ceil(222.2)
  CHECK_THROWS_AS(wlan_tx_duration(12000, 0.0, p), SimError);
}

TEST_CASE("rate ladder floors at the base rate", "[wlan_mac]") {
  const auto t = default_wlan_rate_table();
  CHECK(wlan_rate_bps(-10.0, t) == 6e6);
  CHECK(wlan_rate_bps(3.0, t) == 6e6);
  CHECK(wlan_rate_bps(9.99, t) == 12e6);
  CHECK(wlan_rate_bps(10.0, t) == 18e6);
  CHECK(wlan_rate_bps(22.0, t) == 48e6);
  CHECK(wlan_rate_bps(40.0, t) == 54e6);
  CHECK_THROWS_AS(wlan_rate_bps(10.0, {}), SimError);
}

TEST_CASE("ap queue arms on first frame and counts deliveries", "[wlan_mac]") {
  const DcfParams p;
  Rng rng(4);
  WlanAp ap;
  CHECK(ap.dcf.phase == DcfPhase::IdleNoData);
  ap.enqueue({12000, 0, 7}, p, rng);
  CHECK(ap.dcf.phase == DcfPhase::Difs);
  ap.enqueue({12000, 5, 8}, p, rng);  // second arrival must not re-arm
  CHECK(ap.arrived_packets == 2);
  CHECK(ap.offered_bits == 24000);

  ap.dcf.phase = DcfPhase::WaitAck;  // as if the exchange just finished
  ap.complete_success(p, rng);
  CHECK(ap.delivered_packets == 1);
  CHECK(ap.delivered_bits == 12000);
  CHECK(ap.cycle_delivered_bits == 12000);
  CHECK(ap.dcf.phase == DcfPhase::Backoff);  // more data pending

  ap.dcf.phase = DcfPhase::WaitAck;
  ap.complete_success(p, rng);
  CHECK(ap.dcf.phase == DcfPhase::IdleNoData);
  CHECK(ap.queue.empty());
}

TEST_CASE("retry limit discards the head frame", "[wlan_mac]") {
  const DcfParams p;
  Rng rng(6);
  WlanAp ap;
  ap.enqueue({12000, 0, 7}, p, rng);
  for (int attempt = 0; attempt < p.retry_limit - 1; ++attempt) {
    ap.complete_failure(p, rng);
    CHECK(ap.dropped_packets == 0);
    CHECK(ap.head_retries == attempt + 1);
  }
  const int level_before = ap.dcf.backoff_level;
  CHECK(level_before == p.max_backoff_level);  // 6 collisions saturate at 6
  ap.complete_failure(p, rng);
  CHECK(ap.dropped_packets == 1);
  CHECK(ap.head_retries == 0);
  CHECK(ap.dcf.backoff_level == 0);
  CHECK(ap.dcf.phase == DcfPhase::IdleNoData);
  CHECK(ap.delivered_packets == 0);
}

TEST_CASE("decrements equal externally observed idle backoff slots", "[wlan_mac][property]") {
  const DcfParams p;
  Rng rng(555);
  for (int trial = 0; trial < 1000; ++trial) {
    DcfState s;
    Rng local(splitmix64(static_cast<std::uint64_t>(trial)));
    arm_contention(s, p, local, true);

    std::int64_t observed = 0;
    const int ticks = static_cast<int>(rng.uniform_int(1, 400));
    for (int i = 0; i < ticks; ++i) {
      if (s.phase == DcfPhase::Transmitting) {
        // Randomly resolve the exchange and keep contending.
        if (rng.uniform() < 0.5)
          on_success(s, p, local);
        else
          on_collision(s, p, local);
        continue;
      }
      const bool idle = rng.uniform() < 0.7;
      if (idle && s.phase == DcfPhase::Backoff && s.backoff_counter > 0) ++observed;
      dcf_tick(s, idle, p);
    }
    REQUIRE(s.total_decrements == observed);
  }
}
