#include <doctest.h>

#include "reprosolve/domain.hpp"

using namespace reprosolve;

namespace {
Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_SUITE("domain") {
  TEST_CASE("exterior point projects radially onto the ball") {
    Domain ball = Domain::ball(Vector::Zero(2), 1.0);
    Vector p = vec2(3, 4);
    Vector q = ball.project(p);
    CHECK(q[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(q[1] == doctest::Approx(0.8).epsilon(1e-14));
  }

  TEST_CASE("interior point is returned unchanged, bitwise") {
    Domain ball = Domain::ball(Vector::Zero(2), 1.0);
    Vector p = vec2(0.1, 0.2);
    Vector q = ball.project(p);
    CHECK(q[0] == p[0]);
    CHECK(q[1] == p[1]);
  }

  TEST_CASE("product domains project componentwise") {
    Domain prod = Domain::product(
        {Domain::ball(Vector::Zero(2), 2.0), Domain::ball(Vector::Zero(2), 1.0)});
    Vector p(4);
    p << 0, 5, 0, 0;
    Vector q = prod.project(p);
    CHECK(q[0] == doctest::Approx(0.0));
    CHECK(q[1] == doctest::Approx(2.0));
    CHECK(q[2] == 0.0);
    CHECK(q[3] == 0.0);
  }

  TEST_CASE("dimension mismatch is an input error") {
    Domain ball = Domain::ball(Vector::Zero(2), 1.0);
    CHECK_THROWS_AS(ball.project(Vector::Zero(3)), InputError);
  }

  TEST_CASE("nonpositive radius is rejected") {
    CHECK_THROWS_AS(Domain::ball(Vector::Zero(2), 0.0), InputError);
    CHECK_THROWS_AS(Domain::ball(Vector::Zero(2), -1.0), InputError);
  }

  TEST_CASE("projection is exactly idempotent") {
    Rng rng(substream(5, "idem"));
    for (int i = 0; i < 2000; ++i) {
      Domain dom = Domain::ball(rng.gaussian_vector(4) * 100.0, 0.2 + rng.next_unit());
      Vector p = rng.gaussian_vector(4) * 300.0;
      Vector q = dom.project(p);
      Vector qq = dom.project(q);
      CHECK((qq - q).norm() == 0.0);
    }
  }

  TEST_CASE("projection is Euclidean-nearest against feasible probes") {
    Rng rng(substream(6, "opt"));
    for (int i = 0; i < 1000; ++i) {
      Domain dom = Domain::product(
          {Domain::ball(rng.gaussian_vector(3), 0.4 + rng.next_unit()),
           Domain::ball(rng.gaussian_vector(2), 0.4 + rng.next_unit())});
      Vector p = rng.gaussian_vector(5) * 4.0;
      Vector q(5);
      auto blocks = dom.ball_blocks();
      for (const auto& b : blocks)
        q.segment(b.offset, b.dim) = b.center + rng.ball_point(b.dim, b.radius);
      CHECK((dom.project(p) - p).norm() <= (q - p).norm() + 1e-12);
    }
  }

  TEST_CASE("diameter doubles the radius and sums over products") {
    Domain ball = Domain::ball(Vector::Zero(3), 1.5);
    CHECK(ball.diameter() == doctest::Approx(3.0));
    Domain prod = Domain::product({ball, Domain::ball(Vector::Zero(2), 2.0)});
    CHECK(prod.diameter() == doctest::Approx(std::sqrt(9.0 + 16.0)));
    CHECK(std::isinf(Domain::free(4).diameter()));
    CHECK_FALSE(Domain::free(4).bounded());
  }

  TEST_CASE("ball_blocks rejects unbounded parts") {
    Domain mixed = Domain::product({Domain::free(2), Domain::ball(Vector::Zero(2), 1.0)});
    CHECK_THROWS_AS(mixed.ball_blocks(), UnsupportedMetricError);
  }
}
