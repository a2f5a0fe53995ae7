#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lwcoex/geometry.hpp"

using namespace lwcoex;

namespace {

FloorGeometry default_floor() { return generate_floor(FloorPlan{}); }

NodePosition at(double x, double y, double z = 1.5) {
  NodePosition p;
  p.x = x;
  p.y = y;
  p.z = z;
  return p;
}

}  // namespace

TEST_CASE("floor tiles 200 x 30 m with the corridor in the middle", "[geometry]") {
  const auto g = default_floor();
  CHECK(g.extent.width() == 200.0);
  CHECK(g.extent.height() == 30.0);
  CHECK(g.rooms.size() == 40);
  CHECK(g.corridor.y0 == 10.0);
  CHECK(g.corridor.y1 == 20.0);
  CHECK(g.corridor.x0 == 0.0);
  CHECK(g.corridor.x1 == 200.0);
  CHECK(g.rooms.front().contains(5.0, 5.0));
  CHECK(g.rooms.back().contains(195.0, 25.0));

  double room_area = 0.0;
  for (const auto& r : g.rooms) room_area += r.area();
  CHECK(room_area + g.corridor.area() == g.extent.area());
}

TEST_CASE("floor generation rejects bad plans", "[geometry]") {
  FloorPlan p;
  p.room_rows = 3;
  CHECK_THROWS_AS(generate_floor(p), SimError);
  p = FloorPlan{};
  p.room_size_m = 0.0;
  CHECK_THROWS_AS(generate_floor(p), SimError);
  p = FloorPlan{};
  p.rooms_per_row = -1;
  CHECK_THROWS_AS(generate_floor(p), SimError);
}

TEST_CASE("wall counts for hand-checked segments", "[geometry]") {
  const auto g = default_floor();
  CHECK(count_walls(g, 5, 5, 8, 8) == 0);       // same room
  CHECK(count_walls(g, 5, 5, 15, 5) == 1);      // one partition
  CHECK(count_walls(g, 5, 5, 5, 15) == 1);      // room to corridor
  CHECK(count_walls(g, 5, 15, 195, 15) == 0);   // along the corridor
  CHECK(count_walls(g, 5, 5, 5, 25) == 2);      // straight through both rows
  CHECK(count_walls(g, 5, 5, 35, 5) == 3);      // three partitions in a row
  // Long diagonal: the segment is inside the corridor band for x in
  // [52.5, 147.5], so partitions 60..140 do not count; 10 remain, plus the
  // two long walls.
  CHECK(count_walls(g, 5, 5, 195, 25) == 12);
}

TEST_CASE("wall count is symmetric by construction", "[geometry][property]") {
  const auto g = default_floor();
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double ax = rng.uniform_range(0, 200), ay = rng.uniform_range(0, 30);
    const double bx = rng.uniform_range(0, 200), by = rng.uniform_range(0, 30);
    REQUIRE(count_walls(g, ax, ay, bx, by) == count_walls(g, bx, by, ax, ay));
  }
}

TEST_CASE("infrastructure lands in the corridor far enough apart", "[geometry]") {
  const auto g = default_floor();
  Rng rng(5);
  const auto infra = place_infrastructure(g, 30.0, 3.0, rng);
  REQUIRE(infra.size() == 3);
  CHECK(infra[0].kind == NodeKind::Pico);
  CHECK(infra[1].kind == NodeKind::AccessPoint);
  CHECK(infra[2].kind == NodeKind::AccessPoint);
  for (const auto& p : infra) {
    CHECK(g.corridor.contains(p.x, p.y));
    CHECK(p.z == 3.0);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(distance_2d(infra[i], infra[j]) >= 30.0);

  Rng rng2(5);
  const auto again = place_infrastructure(g, 30.0, 3.0, rng2);
  for (int i = 0; i < 3; ++i) {
    CHECK(again[i].x == infra[i].x);
    CHECK(again[i].y == infra[i].y);
  }
}

TEST_CASE("impossible separation raises instead of spinning", "[geometry]") {
  const auto g = default_floor();
  Rng rng(5);
  CHECK_THROWS_AS(place_infrastructure(g, 500.0, 3.0, rng, 200), SimError);
}

TEST_CASE("users fill the extent with sequential ids", "[geometry]") {
  const auto g = default_floor();
  Rng rng(9);
  const auto users = place_users(g, 4, 6, 1.5, rng, 3);
  REQUIRE(users.size() == 10);
  for (std::size_t i = 0; i < users.size(); ++i) {
    CHECK(users[i].node_id == 3 + static_cast<int>(i));
    CHECK(users[i].kind == (i < 4 ? NodeKind::LteUser : NodeKind::WlanUser));
    CHECK(g.extent.contains(users[i].x, users[i].y));
    CHECK(users[i].z == 1.5);
  }
  CHECK_THROWS_AS(place_users(g, -1, 0, 1.5, rng, 0), SimError);
}

TEST_CASE("pathloss hand values", "[geometry]") {
  PathlossModel m;  // no wall counter: free space
  CHECK_THAT(path_loss_db(at(0, 0), at(1, 0), m), Catch::Matchers::WithinAbs(38.46, 1e-12));
  CHECK_THAT(path_loss_db(at(0, 0), at(0.2, 0), m), Catch::Matchers::WithinAbs(38.46, 1e-12));
  CHECK_THAT(path_loss_db(at(0, 0), at(10, 0), m), Catch::Matchers::WithinAbs(58.46, 1e-12));
  const double d1 = path_loss_db(at(0, 0), at(25, 0), m);
  const double d2 = path_loss_db(at(0, 0), at(50, 0), m);
  CHECK_THAT(d2 - d1, Catch::Matchers::WithinAbs(6.020599913279624, 1e-12));
  CHECK_THAT(received_power_dbm(23.0, 58.46, 3.0), Catch::Matchers::WithinAbs(-32.46, 1e-12));
}

TEST_CASE("wall penalty adds 5 dB per wall up to the cap", "[geometry]") {
  const auto g = default_floor();
  const auto m = make_pathloss_model(g, 38.46, 2.0, 5.0);
  const auto a = at(5, 5), b = at(15, 5);  // 10 m, one partition
  CHECK_THAT(path_loss_db(a, b, m), Catch::Matchers::WithinAbs(58.46 + 5.0, 1e-9));
  // 12 walls geometrically, capped at 6.
  const auto c = at(5, 5), d = at(195, 25);
  const double dist = distance_3d(c, d);
  const double expect = 38.46 + 20.0 * std::log10(dist) + 5.0 * 6;
  CHECK_THAT(path_loss_db(c, d, m), Catch::Matchers::WithinAbs(expect, 1e-9));
}

TEST_CASE("pathloss symmetry and distance monotonicity", "[geometry][property]") {
  const auto g = default_floor();
  const auto m = make_pathloss_model(g, 38.46, 2.0, 5.0);
  PathlossModel free_space;  // fixed wall count of zero isolates the distance term
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const auto a = at(rng.uniform_range(0, 200), rng.uniform_range(0, 30),
                      rng.uniform_range(1.0, 3.0));
    const auto b = at(rng.uniform_range(0, 200), rng.uniform_range(0, 30),
                      rng.uniform_range(1.0, 3.0));
    REQUIRE(path_loss_db(a, b, m) == path_loss_db(b, a, m));

    const double d_near = rng.uniform_range(1.0, 100.0);
    const double d_far = d_near + rng.uniform_range(0.1, 100.0);
    const double pl_near = path_loss_db(at(0, 0, 0), at(d_near, 0, 0), free_space);
    const double pl_far = path_loss_db(at(0, 0, 0), at(d_far, 0, 0), free_space);
    REQUIRE(pl_far > pl_near);
  }
}
