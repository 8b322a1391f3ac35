#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "bilicover/rng.hpp"

using namespace bilicover;

TEST_CASE("same seed reproduces the identical stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and substreams diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 256; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);

  std::set<std::uint64_t> keys;
  for (std::uint64_t tag : {1ull, 2ull, 3ull})
    for (std::uint64_t idx = 0; idx < 50; ++idx)
      keys.insert(substream_seed(99, tag, idx));
  CHECK(keys.size() == 150);
}

TEST_CASE("uniform01 lies in [0,1) with sane mean") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 3 standard errors of the mean of U[0,1)
  CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
  CHECK(rng.calls() == n);
}

TEST_CASE("uniform range and index stay in bounds") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    double v = rng.uniform(-1.0, 1.0);
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
    auto k = rng.uniform_index(7);
    CHECK(k < 7);
  }
}
