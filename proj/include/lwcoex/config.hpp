#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lwcoex/coexistence.hpp"
#include "lwcoex/core.hpp"
#include "lwcoex/phy.hpp"
#include "lwcoex/traffic.hpp"
#include "lwcoex/wlan_mac.hpp"

namespace lwcoex {

// --- Run kinds and experiments ---------------------------------------------

enum class RunKind { LteOnly, WlanOnly, Adaptive, Mode0, Mode1, Mode2, Mode3, Mode4 };

inline std::string to_string(RunKind k) {
  switch (k) {
    case RunKind::LteOnly: return "lte_only";
    case RunKind::WlanOnly: return "wlan_only";
    case RunKind::Adaptive: return "adaptive";
    case RunKind::Mode0: return "mode0";
    case RunKind::Mode1: return "mode1";
    case RunKind::Mode2: return "mode2";
    case RunKind::Mode3: return "mode3";
    case RunKind::Mode4: return "mode4";
  }
  throw SimError("to_string: bad RunKind");
}

inline RunKind run_kind_from_string(const std::string& s) {
  if (s == "lte_only") return RunKind::LteOnly;
  if (s == "wlan_only") return RunKind::WlanOnly;
  if (s == "adaptive") return RunKind::Adaptive;
  if (s == "mode0") return RunKind::Mode0;
  if (s == "mode1") return RunKind::Mode1;
  if (s == "mode2") return RunKind::Mode2;
  if (s == "mode3") return RunKind::Mode3;
  if (s == "mode4") return RunKind::Mode4;
  throw ConfigError("unknown run kind: " + s);
}

enum class Experiment { Single, Fig2, Fig3, Fig4, Fig5, Fig6, Table34, Fig7 };

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Single: return "single";
    case Experiment::Fig2: return "fig2";
    case Experiment::Fig3: return "fig3";
    case Experiment::Fig4: return "fig4";
    case Experiment::Fig5: return "fig5";
    case Experiment::Fig6: return "fig6";
    case Experiment::Table34: return "table3_4";
    case Experiment::Fig7: return "fig7";
  }
  throw SimError("to_string: bad Experiment");
}

inline Experiment experiment_from_string(const std::string& s) {
  if (s == "single") return Experiment::Single;
  if (s == "fig2") return Experiment::Fig2;
  if (s == "fig3") return Experiment::Fig3;
  if (s == "fig4") return Experiment::Fig4;
  if (s == "fig5") return Experiment::Fig5;
  if (s == "fig6") return Experiment::Fig6;
  if (s == "table3_4") return Experiment::Table34;
  if (s == "fig7") return Experiment::Fig7;
  throw ConfigError("unknown experiment: " + s);
}

// --- Config sections ---------------------------------------------------------

struct ScenarioConfig {
  int rooms_per_row = 20;
  double room_size_m = 10.0;
  double corridor_width_m = 10.0;
  double infra_height_m = 3.0;
  double user_height_m = 1.5;
  double min_infra_distance_m = 10.0;
  int n_lte_users = 10;
  int n_wlan_users = 10;
  double tx_power_dbm = 23.0;
  double antenna_gain_db = 3.0;
  double reference_loss_db = 38.46;
  double distance_exponent = 2.0;
  double wall_loss_db = 5.0;
  int max_wall_count = 6;
  double noise_floor_dbm = -101.0;
  double bandwidth_hz = 20e6;
};

struct LteConfig {
  double lambda_per_ms = 0.5;
  std::int64_t packet_bits = 20000;
  int max_retx = 3;
  bool full_buffer = false;
  McsTable mcs_table = default_mcs_table();
};

struct WlanConfig {
  DcfParams dcf;
  std::int64_t payload_bits = 12000;
  RampProfile ramp{0.01, 1.5, 0};  // duration 0 = follow the drop duration
  bool full_buffer = false;
  std::vector<WlanRateEntry> rate_table = default_wlan_rate_table();
};

struct PhyConfig {
  CcaThresholds cca;
};

struct CoexConfig {
  RunKind mode = RunKind::Adaptive;
  std::int64_t t_c_ms = 1000;
  int initial_spared = 5;
  ThresholdTable thresholds = default_threshold_table();
};

struct EngineConfig {
  std::int64_t duration_ms = 20000;
  int drops = 20;
  std::uint64_t seed_base = 12345;
};

struct OutputConfig {
  std::string directory = "out";
  bool dump_topology = false;
};

struct RunConfig {
  Experiment experiment = Experiment::Single;
  ScenarioConfig scenario;
  LteConfig lte;
  WlanConfig wlan;
  PhyConfig phy;
  CoexConfig coex;
  EngineConfig engine;
  OutputConfig output;

  void validate() const;
  std::string serialize() const;
  std::uint64_t hash() const { return fnv1a64(serialize()); }
};

// --- Value parsing --------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected integer, got '" + v + "'");
  }
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected number, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

// "a:b, c:d, ..." pair lists, used for the MCS, rate and threshold tables.
inline std::vector<std::pair<double, double>> to_pairs(const std::string& key,
                                                       const std::string& v) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError(key + ": expected 'x:y' pairs, got '" + item + "'");
    out.emplace_back(to_double(key, trim(item.substr(0, colon))),
                     to_double(key, trim(item.substr(colon + 1))));
  }
  if (out.empty()) throw ConfigError(key + ": empty table");
  return out;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// --- Key dispatch ------------------------------------------------------------------

// Flat `key = value` lines, '#' comments, unknown keys rejected by name.
inline void apply_config_key(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::to_bool;
  using detail::to_double;
  using detail::to_int;
  using detail::to_pairs;

  if (key == "experiment") { c.experiment = experiment_from_string(value); return; }

  if (key == "scenario.rooms_per_row") { c.scenario.rooms_per_row = static_cast<int>(to_int(key, value)); return; }
  if (key == "scenario.room_size_m") { c.scenario.room_size_m = to_double(key, value); return; }
  if (key == "scenario.corridor_width_m") { c.scenario.corridor_width_m = to_double(key, value); return; }
  if (key == "scenario.infra_height_m") { c.scenario.infra_height_m = to_double(key, value); return; }
  if (key == "scenario.user_height_m") { c.scenario.user_height_m = to_double(key, value); return; }
  if (key == "scenario.min_infra_distance_m") { c.scenario.min_infra_distance_m = to_double(key, value); return; }
  if (key == "scenario.n_lte_users") { c.scenario.n_lte_users = static_cast<int>(to_int(key, value)); return; }
  if (key == "scenario.n_wlan_users") { c.scenario.n_wlan_users = static_cast<int>(to_int(key, value)); return; }
  if (key == "scenario.tx_power_dbm") { c.scenario.tx_power_dbm = to_double(key, value); return; }
  if (key == "scenario.antenna_gain_db") { c.scenario.antenna_gain_db = to_double(key, value); return; }
  if (key == "scenario.reference_loss_db") { c.scenario.reference_loss_db = to_double(key, value); return; }
  if (key == "scenario.distance_exponent") { c.scenario.distance_exponent = to_double(key, value); return; }
  if (key == "scenario.wall_loss_db") { c.scenario.wall_loss_db = to_double(key, value); return; }
  if (key == "scenario.max_wall_count") { c.scenario.max_wall_count = static_cast<int>(to_int(key, value)); return; }
  if (key == "scenario.noise_floor_dbm") { c.scenario.noise_floor_dbm = to_double(key, value); return; }
  if (key == "scenario.bandwidth_hz") { c.scenario.bandwidth_hz = to_double(key, value); return; }

  if (key == "lte.lambda_per_ms") { c.lte.lambda_per_ms = to_double(key, value); return; }
  if (key == "lte.packet_bits") { c.lte.packet_bits = to_int(key, value); return; }
  if (key == "lte.max_retx") { c.lte.max_retx = static_cast<int>(to_int(key, value)); return; }
  if (key == "lte.full_buffer") { c.lte.full_buffer = to_bool(key, value); return; }
  if (key == "lte.mcs_table") {
    McsTable t;
    for (auto [sinr, eff] : to_pairs(key, value)) t.entries.push_back({sinr, eff});
    t.validate();
    c.lte.mcs_table = std::move(t);
    return;
  }

  if (key == "wlan.slot_us") { c.wlan.dcf.slot_us = to_int(key, value); return; }
  if (key == "wlan.difs_us") { c.wlan.dcf.difs_us = to_int(key, value); return; }
  if (key == "wlan.sifs_us") { c.wlan.dcf.sifs_us = to_int(key, value); return; }
  if (key == "wlan.ack_us") { c.wlan.dcf.ack_us = to_int(key, value); return; }
  if (key == "wlan.preamble_us") { c.wlan.dcf.preamble_us = to_int(key, value); return; }
  if (key == "wlan.cw_min") { c.wlan.dcf.cw_min = static_cast<int>(to_int(key, value)); return; }
  if (key == "wlan.cw_max") { c.wlan.dcf.cw_max = static_cast<int>(to_int(key, value)); return; }
  if (key == "wlan.max_backoff_level") { c.wlan.dcf.max_backoff_level = static_cast<int>(to_int(key, value)); return; }
  if (key == "wlan.retry_limit") { c.wlan.dcf.retry_limit = static_cast<int>(to_int(key, value)); return; }
  if (key == "wlan.payload_bits") { c.wlan.payload_bits = to_int(key, value); return; }
  if (key == "wlan.ramp_start_per_ms") { c.wlan.ramp.start_rate_per_ms = to_double(key, value); return; }
  if (key == "wlan.ramp_end_per_ms") { c.wlan.ramp.end_rate_per_ms = to_double(key, value); return; }
  if (key == "wlan.full_buffer") { c.wlan.full_buffer = to_bool(key, value); return; }
  if (key == "wlan.rate_table") {
    std::vector<WlanRateEntry> t;
    for (auto [sinr, mbps] : to_pairs(key, value)) t.push_back({sinr, mbps * 1e6});
    c.wlan.rate_table = std::move(t);
    return;
  }

  if (key == "phy.ed_threshold_dbm") { c.phy.cca.ed_dbm = to_double(key, value); return; }
  if (key == "phy.cs_threshold_dbm") { c.phy.cca.cs_dbm = to_double(key, value); return; }

  if (key == "coex.mode") { c.coex.mode = run_kind_from_string(value); return; }
  if (key == "coex.t_c_ms") { c.coex.t_c_ms = to_int(key, value); return; }
  if (key == "coex.initial_spared") { c.coex.initial_spared = static_cast<int>(to_int(key, value)); return; }
  if (key == "coex.thresholds") {
    ThresholdTable t;
    for (auto [gmax, spared] : to_pairs(key, value))
      t.entries.push_back({gmax, static_cast<int>(spared)});
    t.validate();
    c.coex.thresholds = std::move(t);
    return;
  }

  if (key == "engine.duration_ms") { c.engine.duration_ms = to_int(key, value); return; }
  if (key == "engine.drops") { c.engine.drops = static_cast<int>(to_int(key, value)); return; }
  if (key == "engine.seed_base") { c.engine.seed_base = static_cast<std::uint64_t>(to_int(key, value)); return; }

  if (key == "output.directory") { c.output.directory = value; return; }
  if (key == "output.dump_topology") { c.output.dump_topology = to_bool(key, value); return; }

  throw ConfigError("unknown config key: " + key);
}

inline RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    try {
      apply_config_key(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    } catch (const SimError& e) {
      // Table validators speak SimError; inside a config file that is still
      // a config problem.
      throw ConfigError(key + ": " + e.what() + " (line " + std::to_string(line_no) + ")");
    }
  }
  c.validate();
  return c;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// --- Validation and canonical form -----------------------------------------------

inline void RunConfig::validate() const {
  if (scenario.rooms_per_row <= 0 || scenario.room_size_m <= 0 || scenario.corridor_width_m <= 0)
    throw ConfigError("scenario: dimensions must be positive");
  if (scenario.n_lte_users < 0 || scenario.n_wlan_users < 0)
    throw ConfigError("scenario: negative user count");
  if (scenario.bandwidth_hz <= 0) throw ConfigError("scenario.bandwidth_hz: must be positive");
  if (scenario.max_wall_count < 0) throw ConfigError("scenario.max_wall_count: negative");
  if (lte.lambda_per_ms < 0) throw ConfigError("lte.lambda_per_ms: negative");
  if (lte.packet_bits <= 0) throw ConfigError("lte.packet_bits: must be positive");
  if (lte.max_retx < 0) throw ConfigError("lte.max_retx: negative");
  lte.mcs_table.validate();
  wlan.dcf.validate();
  if (wlan.payload_bits <= 0) throw ConfigError("wlan.payload_bits: must be positive");
  if (wlan.rate_table.empty()) throw ConfigError("wlan.rate_table: empty");
  if (phy.cca.cs_dbm > phy.cca.ed_dbm)
    throw ConfigError("phy: cs_threshold must not exceed ed_threshold");
  CycleConfig cyc{coex.t_c_ms, coex.initial_spared};
  try {
    cyc.validate();
  } catch (const SimError& e) {
    throw ConfigError(e.what());
  }
  coex.thresholds.validate();
  if (engine.duration_ms <= 0) throw ConfigError("engine.duration_ms: must be positive");
  if (engine.duration_ms % coex.t_c_ms != 0)
    throw ConfigError("engine.duration_ms must be a multiple of coex.t_c_ms");
  if (engine.drops <= 0) throw ConfigError("engine.drops: must be positive");
  if (wlan.ramp.start_rate_per_ms < 0 || wlan.ramp.end_rate_per_ms < 0)
    throw ConfigError("wlan ramp rates must be non-negative");
  if (output.directory.empty()) throw ConfigError("output.directory: empty");
}

// Canonical key order; feeding this back through the parser reproduces the
// config, and its hash identifies a run in the manifest.
inline std::string RunConfig::serialize() const {
  using detail::fmt;
  std::ostringstream o;
  o << "experiment = " << to_string(experiment) << '\n';
  o << "scenario.rooms_per_row = " << scenario.rooms_per_row << '\n';
  o << "scenario.room_size_m = " << fmt(scenario.room_size_m) << '\n';
  o << "scenario.corridor_width_m = " << fmt(scenario.corridor_width_m) << '\n';
  o << "scenario.infra_height_m = " << fmt(scenario.infra_height_m) << '\n';
  o << "scenario.user_height_m = " << fmt(scenario.user_height_m) << '\n';
  o << "scenario.min_infra_distance_m = " << fmt(scenario.min_infra_distance_m) << '\n';
  o << "scenario.n_lte_users = " << scenario.n_lte_users << '\n';
  o << "scenario.n_wlan_users = " << scenario.n_wlan_users << '\n';
  o << "scenario.tx_power_dbm = " << fmt(scenario.tx_power_dbm) << '\n';
  o << "scenario.antenna_gain_db = " << fmt(scenario.antenna_gain_db) << '\n';
  o << "scenario.reference_loss_db = " << fmt(scenario.reference_loss_db) << '\n';
  o << "scenario.distance_exponent = " << fmt(scenario.distance_exponent) << '\n';
  o << "scenario.wall_loss_db = " << fmt(scenario.wall_loss_db) << '\n';
  o << "scenario.max_wall_count = " << scenario.max_wall_count << '\n';
  o << "scenario.noise_floor_dbm = " << fmt(scenario.noise_floor_dbm) << '\n';
  o << "scenario.bandwidth_hz = " << fmt(scenario.bandwidth_hz) << '\n';
  o << "lte.lambda_per_ms = " << fmt(lte.lambda_per_ms) << '\n';
  o << "lte.packet_bits = " << lte.packet_bits << '\n';
  o << "lte.max_retx = " << lte.max_retx << '\n';
  o << "lte.full_buffer = " << (lte.full_buffer ? "true" : "false") << '\n';
  o << "lte.mcs_table = ";
  for (std::size_t i = 0; i < lte.mcs_table.entries.size(); ++i) {
    if (i) o << ",";
    o << fmt(lte.mcs_table.entries[i].min_sinr_db) << ":"
      << fmt(lte.mcs_table.entries[i].efficiency_bps_hz);
  }
  o << '\n';
  o << "wlan.slot_us = " << wlan.dcf.slot_us << '\n';
  o << "wlan.difs_us = " << wlan.dcf.difs_us << '\n';
  o << "wlan.sifs_us = " << wlan.dcf.sifs_us << '\n';
  o << "wlan.ack_us = " << wlan.dcf.ack_us << '\n';
  o << "wlan.preamble_us = " << wlan.dcf.preamble_us << '\n';
  o << "wlan.cw_min = " << wlan.dcf.cw_min << '\n';
  o << "wlan.cw_max = " << wlan.dcf.cw_max << '\n';
  o << "wlan.max_backoff_level = " << wlan.dcf.max_backoff_level << '\n';
  o << "wlan.retry_limit = " << wlan.dcf.retry_limit << '\n';
  o << "wlan.payload_bits = " << wlan.payload_bits << '\n';
  o << "wlan.ramp_start_per_ms = " << fmt(wlan.ramp.start_rate_per_ms) << '\n';
  o << "wlan.ramp_end_per_ms = " << fmt(wlan.ramp.end_rate_per_ms) << '\n';
  o << "wlan.full_buffer = " << (wlan.full_buffer ? "true" : "false") << '\n';
  o << "wlan.rate_table = ";
  for (std::size_t i = 0; i < wlan.rate_table.size(); ++i) {
    if (i) o << ",";
    o << fmt(wlan.rate_table[i].min_sinr_db) << ":" << fmt(wlan.rate_table[i].rate_bps / 1e6);
  }
  o << '\n';
  o << "phy.ed_threshold_dbm = " << fmt(phy.cca.ed_dbm) << '\n';
  o << "phy.cs_threshold_dbm = " << fmt(phy.cca.cs_dbm) << '\n';
  o << "coex.mode = " << to_string(coex.mode) << '\n';
  o << "coex.t_c_ms = " << coex.t_c_ms << '\n';
  o << "coex.initial_spared = " << coex.initial_spared << '\n';
  o << "coex.thresholds = ";
  for (std::size_t i = 0; i < coex.thresholds.entries.size(); ++i) {
    if (i) o << ",";
    o << fmt(coex.thresholds.entries[i].gamma_max) << ":" << coex.thresholds.entries[i].spared;
  }
  o << '\n';
  o << "engine.duration_ms = " << engine.duration_ms << '\n';
  o << "engine.drops = " << engine.drops << '\n';
  o << "engine.seed_base = " << engine.seed_base << '\n';
  o << "output.directory = " << output.directory << '\n';
  o << "output.dump_topology = " << (output.dump_topology ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace lwcoex
