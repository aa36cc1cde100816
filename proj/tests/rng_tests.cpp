#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"

#include "lab/rng.hpp"

using namespace lab;

TEST_CASE("identical construction replays the identical sequence") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.nextU64() == b.nextU64());
  }
}

TEST_CASE("different stream ids decorrelate even with a shared seed") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.nextU64() == b.nextU64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("nextDouble stays in the half-open unit interval") {
  RngStream r(123, 5);
  for (int i = 0; i < 100000; ++i) {
    const double x = r.nextDouble();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("uniform covers its range with a plausible mean") {
  RngStream r(9, 1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.uniform(2.0, 4.0);
    CHECK(x >= 2.0);
    CHECK(x < 4.0);
    sum += x;
  }
  // Mean of U(2,4) is 3 with sd ~ 0.577/sqrt(n): 5 sigma ~ 0.0065.
  CHECK(std::abs(sum / n - 3.0) < 0.01);
}

TEST_CASE("bernoulli frequency tracks its parameter") {
  RngStream r(77, 3);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    if (r.bernoulli(0.3)) ++hits;
  }
  // sd = sqrt(0.3*0.7/n) ~ 0.00145; allow 5 sigma.
  CHECK(std::abs(hits / static_cast<double>(n) - 0.3) < 0.0073);
  RngStream r2(77, 4);
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(r2.bernoulli(0.0));
    CHECK(r2.bernoulli(1.0));
  }
}

TEST_CASE("substream derivation is deterministic and distinct") {
  RngStream base(11, 2);
  RngStream childA = base.substream(0);
  RngStream childA2 = RngStream(11, 2).substream(0);
  RngStream childB = base.substream(1);
  CHECK(childA.nextU64() == childA2.nextU64());
  CHECK(childA.nextU64() != childB.nextU64());
}

TEST_CASE("low bits do not repeat over a short horizon") {
  // SplitMix-style generators pass this trivially; a regression here would
  // mean the state update got broken.
  RngStream r(1, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 4096; ++i) seen.insert(r.nextU64());
  CHECK(seen.size() == 4096);
}

TEST_CASE("accessors echo the construction parameters") {
  RngStream r(123456789, 42);
  CHECK(r.seed() == 123456789);
  CHECK(r.streamId() == 42);
}
