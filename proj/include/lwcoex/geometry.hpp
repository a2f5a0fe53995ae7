#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lwcoex/core.hpp"

namespace lwcoex {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

// Dual-stripe floor: two rows of square rooms separated by a corridor
// running the full length of the building.
struct FloorPlan {
  int room_rows = 2;  // the layout is defined for exactly two rows
  int rooms_per_row = 20;
  double room_size_m = 10.0;
  double corridor_width_m = 10.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
};

enum class NodeKind { Pico, AccessPoint, LteUser, WlanUser };

inline bool is_infrastructure(NodeKind k) {
  return k == NodeKind::Pico || k == NodeKind::AccessPoint;
}

struct NodePosition {
  int node_id = -1;
  NodeKind kind = NodeKind::LteUser;
  double x = 0, y = 0, z = 0;
};

inline double distance_2d(const NodePosition& a, const NodePosition& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_3d(const NodePosition& a, const NodePosition& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

struct FloorGeometry {
  FloorPlan plan;
  std::vector<Rect> rooms;  // row 0 (below corridor) first, then row 1
  Rect corridor;
  Rect extent;
};

// Rooms and corridor tile the extent exactly; rejects degenerate dimensions.
inline FloorGeometry generate_floor(const FloorPlan& plan) {
  if (plan.room_rows != 2)
    throw SimError("generate_floor: layout requires exactly 2 room rows");
  if (plan.rooms_per_row <= 0 || plan.room_size_m <= 0 || plan.corridor_width_m <= 0)
    throw SimError("generate_floor: dimensions must be strictly positive");

  FloorGeometry g;
  g.plan = plan;
  const double s = plan.room_size_m;
  const double w = plan.corridor_width_m;
  const double length = plan.rooms_per_row * s;
  const double ox = plan.origin_x;
  const double oy = plan.origin_y;

  g.extent = {ox, oy, ox + length, oy + 2 * s + w};
  g.corridor = {ox, oy + s, ox + length, oy + s + w};
  g.rooms.reserve(static_cast<std::size_t>(2 * plan.rooms_per_row));
  for (int i = 0; i < plan.rooms_per_row; ++i)
    g.rooms.push_back({ox + i * s, oy, ox + (i + 1) * s, oy + s});
  for (int i = 0; i < plan.rooms_per_row; ++i)
    g.rooms.push_back({ox + i * s, oy + s + w, ox + (i + 1) * s, oy + 2 * s + w});
  return g;
}

// Interior walls crossed by the 2D segment a-b: the two long walls between
// each room row and the corridor, plus the room-to-room partitions inside
// the rows. Crossings exactly on a wall line count as no crossing, which
// keeps the count symmetric in (a, b).
inline int count_walls(const FloorGeometry& g, double ax, double ay, double bx, double by) {
  const double s = g.plan.room_size_m;
  const double y_lo = g.plan.origin_y + s;                            // row 0 / corridor wall
  const double y_hi = y_lo + g.plan.corridor_width_m;                 // corridor / row 1 wall
  int walls = 0;

  auto crosses = [](double p, double q, double line) { return (p - line) * (q - line) < 0.0; };

  if (crosses(ay, by, y_lo)) ++walls;
  if (crosses(ay, by, y_hi)) ++walls;

  for (int i = 1; i < g.plan.rooms_per_row; ++i) {
    const double x_wall = g.plan.origin_x + i * s;
    if (!crosses(ax, bx, x_wall)) continue;
    const double t = (x_wall - ax) / (bx - ax);
    const double y_at = ay + t * (by - ay);
    if (y_at < y_lo || y_at > y_hi) ++walls;  // partition walls exist only in the rows
  }
  return walls;
}

// 1 Pico + 2 APs, uniform in the corridor, pairwise 2D distance >= min_distance.
// Rejection sampling; a bounded attempt budget turns an infeasible corridor
// into an error instead of an endless loop.
inline std::vector<NodePosition> place_infrastructure(const FloorGeometry& g,
                                                      double min_distance_m,
                                                      double height_m, Rng& rng,
                                                      int max_attempts = 10000) {
  const Rect& c = g.corridor;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    NodePosition pts[3];
    for (int i = 0; i < 3; ++i) {
      pts[i].x = rng.uniform_range(c.x0, c.x1);
      pts[i].y = rng.uniform_range(c.y0, c.y1);
      pts[i].z = height_m;
    }
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) < min_distance_m) {
          ok = false;
          break;
        }
    if (!ok) continue;
    pts[0].node_id = 0;
    pts[0].kind = NodeKind::Pico;
    pts[1].node_id = 1;
    pts[1].kind = NodeKind::AccessPoint;
    pts[2].node_id = 2;
    pts[2].kind = NodeKind::AccessPoint;
    return {pts[0], pts[1], pts[2]};
  }
  throw SimError("place_infrastructure: could not satisfy the minimum-distance "
                 "constraint; corridor too small");
}

// Users i.i.d. uniform over the whole floor (rooms or corridor), stationary.
inline std::vector<NodePosition> place_users(const FloorGeometry& g, int n_lte, int n_wlan,
                                             double height_m, Rng& rng, int first_id) {
  if (n_lte < 0 || n_wlan < 0) throw SimError("place_users: negative user count");
  std::vector<NodePosition> users;
  users.reserve(static_cast<std::size_t>(n_lte + n_wlan));
  int id = first_id;
  for (int i = 0; i < n_lte + n_wlan; ++i) {
    NodePosition p;
    p.node_id = id++;
    p.kind = i < n_lte ? NodeKind::LteUser : NodeKind::WlanUser;
    p.x = rng.uniform_range(g.extent.x0, g.extent.x1);
    p.y = rng.uniform_range(g.extent.y0, g.extent.y1);
    p.z = height_m;
    users.push_back(p);
  }
  return users;
}

// Log-distance pathloss with a per-wall penetration penalty. The wall
// counter is injected so the model stays usable without any floor geometry
// (free-space tests, link-budget checks). The penetration term is capped at
// max_wall_count walls: long shallow diagonals would otherwise rack up a
// dozen partition crossings and bury corner links tens of dB below the
// noise floor, where the real signal would be corridor-guided instead.
struct PathlossModel {
  double reference_loss_db = 38.46;  // at 1 m
  double distance_exponent = 2.0;
  double wall_loss_db = 5.0;
  int max_wall_count = 6;
  std::function<int(const NodePosition&, const NodePosition&)> wall_counter;
};

inline PathlossModel make_pathloss_model(const FloorGeometry& g, double reference_loss_db,
                                         double distance_exponent, double wall_loss_db,
                                         int max_wall_count = 6) {
  PathlossModel m;
  m.reference_loss_db = reference_loss_db;
  m.distance_exponent = distance_exponent;
  m.wall_loss_db = wall_loss_db;
  m.max_wall_count = max_wall_count;
  m.wall_counter = [g](const NodePosition& a, const NodePosition& b) {
    return count_walls(g, a.x, a.y, b.x, b.y);
  };
  return m;
}

// Coincident or sub-metre separations are clamped to 1 m rather than rejected.
inline double path_loss_db(const NodePosition& a, const NodePosition& b,
                           const PathlossModel& model) {
  const double d = std::max(distance_3d(a, b), 1.0);
  const int walls = model.wall_counter ? model.wall_counter(a, b) : 0;
  const int counted = std::min(walls, model.max_wall_count);
  const double pl = model.reference_loss_db +
                    10.0 * model.distance_exponent * std::log10(d) +
                    model.wall_loss_db * counted;
  return std::max(pl, 0.0);
}

inline double received_power_dbm(double tx_dbm, double pl_db, double gain_db) {
  return tx_dbm + gain_db - pl_db;
}

}  // namespace lwcoex
