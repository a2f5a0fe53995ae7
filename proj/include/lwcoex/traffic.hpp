#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "lwcoex/core.hpp"

namespace lwcoex {

// Rates are packets per millisecond throughout, matching how loads are
// quoted everywhere else in this project.

inline double offered_load_bps(double rate_per_ms, std::int64_t packet_bits) {
  return rate_per_ms * static_cast<double>(packet_bits) * 1000.0;
}

// One exponential gap, rounded up to the integer clock and never zero.
// A zero-rate source is simply silent.
inline std::optional<TimeUs> next_interarrival_us(double lambda_per_ms, Rng& rng) {
  if (lambda_per_ms < 0) throw SimError("next_interarrival_us: negative rate");
  if (lambda_per_ms == 0) return std::nullopt;
  const double gap = rng.exponential(1000.0 / lambda_per_ms);
  return std::max<TimeUs>(1, static_cast<TimeUs>(std::ceil(gap)));
}

struct RampProfile {
  double start_rate_per_ms = 0.0;
  double end_rate_per_ms = 0.0;
  std::int64_t duration_ms = 1;

  void validate() const {
    if (duration_ms <= 0) throw SimError("RampProfile: duration must be positive");
    if (start_rate_per_ms < 0 || end_rate_per_ms < 0)
      throw SimError("RampProfile: rates must be non-negative");
  }
};

inline double ramp_rate(const RampProfile& p, TimeUs t) {
  if (t < 0) throw SimError("ramp_rate: negative time");
  const double frac =
      std::min(1.0, static_cast<double>(t) / (static_cast<double>(p.duration_ms) * 1000.0));
  return p.start_rate_per_ms + (p.end_rate_per_ms - p.start_rate_per_ms) * frac;
}

// Poisson arrival stream, optionally with a linear rate ramp. Time-varying
// rates use thinning against the peak rate, which is exact. The stream owns
// its rng so two streams never perturb one another.
class ArrivalProcess {
 public:
  ArrivalProcess(double rate_per_ms, std::int64_t packet_bits, std::uint64_t seed)
      : ramp_{rate_per_ms, rate_per_ms, 1},
        constant_(true),
        max_rate_(rate_per_ms),
        packet_bits_(packet_bits),
        rng_(seed) {
    if (rate_per_ms < 0) throw SimError("ArrivalProcess: negative rate");
  }

  ArrivalProcess(const RampProfile& ramp, std::int64_t packet_bits, std::uint64_t seed)
      : ramp_(ramp),
        constant_(false),
        max_rate_(std::max(ramp.start_rate_per_ms, ramp.end_rate_per_ms)),
        packet_bits_(packet_bits),
        rng_(seed) {
    ramp_.validate();
  }

  std::int64_t packet_bits() const { return packet_bits_; }

  // Successive arrival timestamps, strictly increasing; nullopt once the
  // source can produce no further arrivals (zero rate).
  std::optional<TimeUs> next() {
    if (max_rate_ <= 0) return std::nullopt;
    const double mean_gap_us = 1000.0 / max_rate_;
    for (;;) {
      clock_us_ += rng_.exponential(mean_gap_us);
      const auto t = static_cast<TimeUs>(std::ceil(clock_us_));
      if (!constant_) {
        const double r = ramp_rate(ramp_, t);
        if (rng_.uniform() * max_rate_ >= r) continue;  // thinned out
      }
      last_emit_ = std::max(last_emit_ + 1, t);
      return last_emit_;
    }
  }

 private:
  RampProfile ramp_;
  bool constant_;
  double max_rate_;
  std::int64_t packet_bits_;
  Rng rng_;
  double clock_us_ = 0.0;
  TimeUs last_emit_ = -1;
};

}  // namespace lwcoex
