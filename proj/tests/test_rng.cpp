#include <doctest.h>

#include "reprosolve/rng.hpp"

using namespace reprosolve;

TEST_SUITE("rng") {
  TEST_CASE("same seed replays the same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  }

  TEST_CASE("substreams separate by role and index") {
    CHECK(substream(7, "grad", 0) != substream(7, "grad", 1));
    CHECK(substream(7, "grad", 0) != substream(7, "init", 0));
    CHECK(substream(7, "grad", 3) != substream(8, "grad", 3));
    CHECK(substream(7, "grad", 2) == substream(7, "grad", 2));
  }

  TEST_CASE("unit vectors and ball points respect their geometry") {
    Rng rng(substream(11, "test"));
    for (int i = 0; i < 50; ++i) {
      CHECK(rng.unit_vector(5).norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rng.ball_point(5, 0.3).norm() <= 0.3 + 1e-12);
    }
  }

  TEST_CASE("uniform draws stay in [0,1) and cover the range") {
    Rng rng(substream(3, "unit"));
    double lo = 1, hi = 0;
    for (int i = 0; i < 20000; ++i) {
      double u = rng.next_unit();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
  }
}
