#include <doctest.h>

#include <cmath>

#include "reprosolve/min_solvers.hpp"
#include "reprosolve/metrics.hpp"

using namespace reprosolve;

namespace {
MinProblem half_x_squared() {
  return MinProblem(Matrix::Identity(1, 1), Vector::Zero(1), Domain::free(1));
}
OracleSpec exact_spec() { return {OracleKind::Exact, 0, GradMode::FixedDirection, 0}; }
}  // namespace

TEST_SUITE("min_solvers") {
  TEST_CASE("gd contracts the scalar quadratic geometrically") {
    MinProblem p = half_x_squared();
    InexactMinOracle oracle(p, exact_spec());
    MinSolverParams params;
    params.stepsize = 0.5;
    params.iters = 1;
    Vector x0 = Vector::Ones(1);
    SolverRun run = gd(p, oracle, x0, params);
    CHECK(run.output[0] == doctest::Approx(0.5).epsilon(1e-15));

    params.iters = 10;
    InexactMinOracle oracle2(p, exact_spec());
    SolverRun run10 = gd(p, oracle2, x0, params);
    CHECK(run10.output[0] == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-12));
    CHECK(run10.oracle_calls == 10);
  }

  TEST_CASE("gd sits still at the minimizer") {
    MinProblem p = half_x_squared();
    InexactMinOracle oracle(p, exact_spec());
    MinSolverParams params;
    params.iters = 25;
    SolverRun run = gd(p, oracle, Vector::Zero(1), params);
    CHECK(run.output[0] == 0.0);
    for (const auto& z : run.iterates) CHECK(z[0] == 0.0);
  }

  TEST_CASE("negative stepsizes are config errors") {
    MinProblem p = half_x_squared();
    InexactMinOracle oracle(p, exact_spec());
    MinSolverParams params;
    params.stepsize = -0.1;
    params.iters = 1;
    CHECK_THROWS_AS(gd(p, oracle, Vector::Ones(1), params), ConfigError);
    CHECK_THROWS_AS(inexact_agd(p, oracle, Vector::Ones(1), params), ConfigError);
  }

  TEST_CASE("momentum coefficient matches the closed form") {
    // frozen from (2 - sqrt(1/2)) / (2 + sqrt(1/2))
    CHECK(agd_momentum_coefficient(2.0, 1.0) ==
          doctest::Approx(0.477592250072517).epsilon(1e-12));
    CHECK(agd_momentum_coefficient(2.0, 1.0) ==
          doctest::Approx((2.0 - std::sqrt(0.5)) / (2.0 + std::sqrt(0.5))));
    CHECK(agd_momentum_coefficient(4.0, 1.0) > 0);
    CHECK(agd_momentum_coefficient(4.0, 1.0) < 1);
    CHECK_THROWS_AS(agd_momentum_coefficient(1.0, 0.0), ConfigError);
  }

  TEST_CASE("accelerated one-step hand evaluation") {
    MinProblem p = half_x_squared();
    InexactMinOracle oracle(p, exact_spec());
    MinSolverParams params;
    params.iters = 1;
    params.smoothness = 2.0;  // treat the objective as 1-smooth plus r = 1
    params.modulus = 1.0;
    SolverRun run = inexact_agd(p, oracle, Vector::Ones(1), params);
    CHECK(run.output[0] == doctest::Approx(0.75).epsilon(1e-15));
  }

  TEST_CASE("accelerated iterates stay at the minimizer") {
    MinProblem p = half_x_squared();
    InexactMinOracle oracle(p, exact_spec());
    MinSolverParams params;
    params.iters = 30;
    params.smoothness = 2.0;
    params.modulus = 1.0;
    SolverRun run = inexact_agd(p, oracle, Vector::Zero(1), params);
    for (const auto& z : run.iterates) CHECK(z[0] == 0.0);
  }

  TEST_CASE("regularizing a constant objective returns the anchor") {
    MinProblem p(Matrix::Zero(2, 2), Vector::Zero(2), Domain::free(2));
    InexactMinOracle oracle(p, exact_spec());
    RegMinParams rp;
    rp.r = 1.0;
    rp.eps_r = 1e-12;
    Vector x0(2);
    x0 << 3, -1;
    SolverRun run = reg_min(p, oracle, x0, rp);
    CHECK((run.output - x0).norm() <= 1e-6);
    CHECK_FALSE(run.budget_exceeded);
  }

  TEST_CASE("regularized quadratic halves the anchor") {
    MinProblem p(Matrix::Identity(2, 2), Vector::Zero(2), Domain::free(2));
    InexactMinOracle oracle(p, exact_spec());
    RegMinParams rp;
    rp.r = 1.0;
    rp.eps_r = 1e-10;
    Vector x0(2);
    x0 << 2, 4;
    SolverRun run = reg_min(p, oracle, x0, rp);
    CHECK((run.output - 0.5 * x0).norm() <= std::sqrt(2 * rp.eps_r / rp.r));
  }

  TEST_CASE("degenerate regularization is rejected") {
    InstanceSeedSpec spec{3, 4, 0.5, 2.0, 0};
    MinProblem p = make_quadratic_min(spec, 1.0);
    InexactMinOracle oracle(p, exact_spec());
    RegMinParams rp;
    rp.r = 1e-16 * p.smoothness();
    rp.eps_r = 1e-6;
    CHECK_THROWS_AS(reg_min(p, oracle, Vector::Zero(4), rp), ConfigError);
  }

  TEST_CASE("regularized solutions contract paired initializations") {
    for (int i = 0; i < 10; ++i) {
      InstanceSeedSpec spec{substream(55, "contract", i), 6, 0.2, 3.0, i % 2};
      MinProblem p = make_quadratic_min(spec, 1.0);
      Rng rng(substream(55, "x0", i));
      Vector x0 = rng.gaussian_vector(6);
      Vector x0b = x0 + 0.7 * rng.unit_vector(6);
      RegMinParams rp;
      rp.r = 0.4;
      rp.eps_r = 1e-12;
      auto solve = [&](const Vector& s) {
        InexactMinOracle oracle(p, exact_spec());
        return reg_min(p, oracle, s, rp).output;
      };
      CHECK((solve(x0) - solve(x0b)).norm() <= (x0 - x0b).norm() + 1e-5);
    }
  }

  TEST_CASE("inexact accelerated plateau obeys the stated envelope") {
    InstanceSeedSpec spec{substream(77, "plateau"), 8, 1.0, 3.0, 0};
    MinProblem p = make_quadratic_min(spec, 1.0);
    const double ell = p.smoothness();
    const double r = p.modulus();
    const double delta = 0.05;
    Rng rng(substream(77, "x0"));
    Vector x0 = rng.gaussian_vector(8);
    auto run_with = [&](double d) {
      OracleSpec spec_d{OracleKind::InexactGrad, d, GradMode::FixedDirection,
                        substream(77, "dir")};
      InexactMinOracle oracle(p, spec_d);
      MinSolverParams params;
      params.iters = 4000;
      return inexact_agd(p, oracle, x0, params);
    };
    SolverRun run1 = run_with(delta);
    double gap = optimality_gap(p, run1.output);
    double envelope =
        std::sqrt(2 * ell / r) * (1.0 / (ell + r) + 2.0 / r) * delta * delta;
    CHECK(gap <= envelope);

    double d1 = (run_with(delta).output - p.minimizer()).squaredNorm();
    double d2 = (run_with(2 * delta).output - p.minimizer()).squaredNorm();
    CHECK(d2 / d1 >= 2.0);
    CHECK(d2 / d1 <= 8.0);
  }

  TEST_CASE("solver runs are bitwise reproducible") {
    InstanceSeedSpec spec{substream(88, "det"), 6, 0.5, 4.0, 0};
    MinProblem p = make_quadratic_min(spec, 2.0);
    OracleSpec ospec{OracleKind::InexactGrad, 0.1, GradMode::PointHash, 5};
    MinSolverParams params;
    params.iters = 300;
    auto once = [&] {
      InexactMinOracle oracle(p, ospec);
      return inexact_agd(p, oracle, Vector::Zero(6), params);
    };
    SolverRun a = once(), b = once();
    CHECK((a.output - b.output).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.iterates.size() == b.iterates.size());
    for (std::size_t i = 0; i < a.iterates.size(); ++i)
      CHECK((a.iterates[i] - b.iterates[i]).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("oracle call accounting matches one call per iteration") {
    InstanceSeedSpec spec{4, 5, 0.5, 2.0, 0};
    MinProblem p = make_quadratic_min(spec, 1.0);
    InexactMinOracle oracle(p, exact_spec());
    MinSolverParams params;
    params.iters = 37;
    CHECK(gd(p, oracle, Vector::Zero(5), params).oracle_calls == 37);
    InexactMinOracle oracle2(p, exact_spec());
    CHECK(inexact_agd(p, oracle2, Vector::Zero(5), params).oracle_calls == 37);
  }
}
