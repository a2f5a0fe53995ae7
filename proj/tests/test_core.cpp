#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "lwcoex/core.hpp"

using namespace lwcoex;

TEST_CASE("splitmix64 matches reference outputs", "[core]") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64(0x123456789ABCDEF0ULL) == 0x161922C645CE50E8ULL);
}

TEST_CASE("substream seeds are deterministic and distinct", "[core]") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream = 0; stream < 64; ++stream) {
    const auto s = substream_seed(12345, stream);
    CHECK(s == substream_seed(12345, stream));
    seen.insert(s);
  }
  CHECK(seen.size() == 64);
  CHECK(substream_seed(12345, 0) != substream_seed(12346, 0));
}

TEST_CASE("uniform stays in [0,1) with plausible mean", "[core]") {
  Rng rng(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK_THAT(sum / 100000.0, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("uniform_int covers both inclusive endpoints", "[core]") {
  Rng rng(11);
  bool lo_hit = false, hi_hit = false;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform_int(3, 9);
    REQUIRE(v >= 3);
    REQUIRE(v <= 9);
    lo_hit |= (v == 3);
    hi_hit |= (v == 9);
  }
  CHECK(lo_hit);
  CHECK(hi_hit);
  CHECK(rng.uniform_int(5, 5) == 5);
}

TEST_CASE("exponential draws have the requested mean", "[core]") {
  Rng rng(13);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(1000.0);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  CHECK_THAT(sum / n, Catch::Matchers::WithinRel(1000.0, 0.02));
}

TEST_CASE("equal seeds give equal streams", "[core]") {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("fnv1a64 matches published vectors", "[core]") {
  CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(fnv1a64("foobar") == 0x85944171F73967E8ULL);
}

TEST_CASE("decibel helpers invert each other", "[core]") {
  CHECK_THAT(db_to_linear(3.010299956639812), Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THAT(dbm_to_mw(0.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(mw_to_dbm(dbm_to_mw(-62.0)), Catch::Matchers::WithinAbs(-62.0, 1e-12));
  CHECK_THAT(linear_to_db(db_to_linear(17.3)), Catch::Matchers::WithinAbs(17.3, 1e-12));
}
