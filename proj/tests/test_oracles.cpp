#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "reprosolve/oracles.hpp"

using namespace reprosolve;

namespace {
MinProblem identity_problem(int d) {
  return MinProblem(Matrix::Identity(d, d), Vector::Zero(d), Domain::free(d));
}
}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("zero-delta initialization returns the reference point") {
    OracleSpec spec{OracleKind::InexactInit, 0.0, GradMode::FixedDirection, 1};
    Vector u0 = Vector::Ones(3);
    InitDraw d = draw_init(spec, Domain::free(3), u0);
    CHECK((d.start - u0).norm() == 0.0);
    CHECK(d.offset_norm == 0.0);
  }

  TEST_CASE("initialization lands within delta/2 of the reference") {
    OracleSpec spec{OracleKind::InexactInit, 0.2, GradMode::FixedDirection, 5};
    Vector u0 = Vector::Zero(4);
    InitDraw d = draw_init(spec, Domain::free(4), u0);
    CHECK(d.offset_norm <= 0.1 + 1e-15);
    CHECK(d.offset_norm > 0);

    OracleSpec spec2 = spec;
    spec2.seed = 6;
    InitDraw d2 = draw_init(spec2, Domain::free(4), u0);
    CHECK((d.start - d2.start).norm() <= 0.2 + 1e-15);
  }

  TEST_CASE("initialization stays feasible and rejects infeasible references") {
    Domain ball = Domain::ball(Vector::Zero(3), 1.0);
    OracleSpec spec{OracleKind::InexactInit, 0.5, GradMode::FixedDirection, 2};
    Vector edge = Vector::Zero(3);
    edge[0] = 1.0;
    InitDraw d = draw_init(spec, ball, edge);
    CHECK(ball.contains(d.start));
    CHECK_THROWS_AS(draw_init(spec, ball, Vector(3 * edge)), InputError);
    OracleSpec wrong{OracleKind::InexactGrad, 0.5, GradMode::FixedDirection, 2};
    CHECK_THROWS_AS(draw_init(wrong, ball, edge), ConfigError);
  }

  TEST_CASE("exact oracle returns the true gradient") {
    MinProblem p = identity_problem(2);
    OracleSpec spec{OracleKind::Exact, 0.0, GradMode::FixedDirection, 3};
    InexactMinOracle oracle(p, spec);
    Vector x = Vector::Ones(2);
    CHECK((oracle.grad(x) - x).norm() == 0.0);
    CHECK(oracle.calls() == 1);
  }

  TEST_CASE("fixed direction adds the same delta-sized offset everywhere") {
    MinProblem p = identity_problem(4);
    OracleSpec spec{OracleKind::InexactGrad, 0.1, GradMode::FixedDirection, 9};
    InexactMinOracle oracle(p, spec);
    Rng rng(substream(9, "pts"));
    Vector x0 = rng.gaussian_vector(4);
    Vector u = (oracle.grad(x0) - p.grad(x0)) / 0.1;
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 20; ++i) {
      Vector x = rng.gaussian_vector(4);
      Vector noise = oracle.grad(x) - p.grad(x);
      CHECK((noise - 0.1 * u).norm() <= 1e-15);
    }
  }

  TEST_CASE("literal all-ones mode exceeds the pathwise budget by sqrt(d)") {
    MinProblem p = identity_problem(4);
    OracleSpec spec{OracleKind::InexactGrad, 0.1, GradMode::PaperLiteralOnes, 0};
    InexactMinOracle oracle(p, spec);
    Vector x = Vector::Ones(4);
    Vector noise = oracle.grad(x) - p.grad(x);
    CHECK((noise - 0.1 * Vector::Ones(4)).norm() <= 1e-15);
    CHECK(noise.norm() == doctest::Approx(0.2).epsilon(1e-12));
  }

  TEST_CASE("point-hash perturbations are unit-budget and query-determined") {
    MinProblem p = identity_problem(5);
    OracleSpec spec{OracleKind::InexactGrad, 0.25, GradMode::PointHash, 17};
    InexactMinOracle o1(p, spec), o2(p, spec);
    Rng rng(substream(17, "pts"));
    for (int i = 0; i < 200; ++i) {
      Vector x = rng.gaussian_vector(5);
      Vector g1 = o1.grad(x);
      CHECK(std::abs((g1 - p.grad(x)).norm() - 0.25) <= 1e-12);
      CHECK((g1 - o2.grad(x)).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("audit reports the constant perturbation norm exactly") {
    MinProblem p = identity_problem(3);
    Rng rng(substream(21, "pts"));
    std::vector<Vector> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(rng.gaussian_vector(3));
    OracleSpec fixed{OracleKind::InexactGrad, 0.3, GradMode::FixedDirection, 8};
    CHECK(std::abs(audit_inexactness(fixed, p, pts) - 0.3) <= 1e-12);
    OracleSpec exact{OracleKind::Exact, 0.0, GradMode::FixedDirection, 8};
    CHECK(audit_inexactness(exact, p, pts) == 0.0);
    CHECK_THROWS_AS(audit_inexactness(exact, p, {}), InputError);
  }

  TEST_CASE("stochastic noise has the declared total variance") {
    MinProblem p = identity_problem(10);
    OracleSpec spec{OracleKind::StochasticGrad, 1.0, GradMode::FixedDirection, 33};
    std::vector<Vector> pts(100000, Vector::Zero(10));
    double mean_sq = audit_inexactness(spec, p, pts);
    CHECK(mean_sq >= 0.97);
    CHECK(mean_sq <= 1.03);
  }

  TEST_CASE("stochastic gradients are unbiased per coordinate") {
    MinProblem p = identity_problem(6);
    OracleSpec spec{OracleKind::StochasticGrad, 0.8, GradMode::FixedDirection, 12};
    InexactMinOracle oracle(p, spec);
    Vector x = Vector::Ones(6);
    Vector g = p.grad(x);
    Vector acc = Vector::Zero(6);
    const int n = 100000;
    for (int i = 0; i < n; ++i) acc += oracle.grad(x);
    acc /= n;
    double stderr_coord = (0.8 / std::sqrt(6.0)) / std::sqrt(double(n));
    for (int i = 0; i < 6; ++i)
      CHECK(std::abs(acc[i] - g[i]) <= 4.0 * stderr_coord);
  }

  TEST_CASE("distinct stochastic seeds decorrelate") {
    MinProblem p = identity_problem(4);
    OracleSpec a{OracleKind::StochasticGrad, 1.0, GradMode::FixedDirection, 100};
    OracleSpec b = a;
    b.seed = 101;
    InexactMinOracle oa(p, a), ob(p, b);
    Vector x = Vector::Zero(4);
    double sxy = 0, sxx = 0, syy = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      double u = oa.grad(x)[0], v = ob.grad(x)[0];
      sxy += u * v;
      sxx += u * u;
      syy += v * v;
    }
    double rho = sxy / std::sqrt(sxx * syy);
    CHECK(std::abs(rho) < 0.05);
  }

  TEST_CASE("joint oracle perturbs the stacked gradient within budget") {
    MinimaxProblem game = MinimaxProblem::bilinear(Matrix::Identity(3, 3), 2.0);
    OracleSpec spec{OracleKind::InexactGrad, 0.15, GradMode::FixedDirection, 7};
    InexactJointOracle oracle(game, spec);
    Rng rng(substream(7, "pts"));
    for (int i = 0; i < 50; ++i) {
      Vector x = rng.ball_point(3, 2.0), y = rng.ball_point(3, 2.0);
      auto [gx, gy] = oracle.grad(x, y);
      double err = std::sqrt((gx - game.grad_x(x, y)).squaredNorm() +
                             (gy - game.grad_y(x, y)).squaredNorm());
      CHECK(std::abs(err - 0.15) <= 1e-12);
    }
    CHECK(oracle.calls() == 50);
  }

  TEST_CASE("oracle spec round-trips through json") {
    OracleSpec spec{OracleKind::StochasticGrad, 0.37, GradMode::PointHash, 555};
    OracleSpec back = OracleSpec::from_json(spec.to_json());
    CHECK(back.kind == spec.kind);
    CHECK(back.delta == spec.delta);
    CHECK(back.grad_mode == spec.grad_mode);
    CHECK(back.seed == spec.seed);
  }
}
