#include <doctest.h>

#include <Eigen/Dense>

#include "reprosolve/problems.hpp"

#include <nlohmann/json.hpp>

using namespace reprosolve;

TEST_SUITE("problems") {
  TEST_CASE("degenerate eigenvalue ranges are rejected") {
    InstanceSeedSpec bad{1, 4, 2.0, 1.0, 0};
    CHECK_THROWS_AS(structured_psd(bad), InputError);
    InstanceSeedSpec bad2{1, 4, 0.5, 1.0, 4};
    CHECK_THROWS_AS(structured_psd(bad2), InputError);
  }

  TEST_CASE("unit eigenvalue range forces the identity") {
    InstanceSeedSpec spec{99, 3, 1.0, 1.0, 0};
    Matrix A = structured_psd(spec);
    CHECK((A - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
  }

  TEST_CASE("rank-deficient draw has the requested spectrum envelope") {
    InstanceSeedSpec spec{2024, 100, 0.1, 10.0, 1};
    Matrix A = structured_psd(spec);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    CHECK(std::abs(es.eigenvalues().minCoeff()) < 1e-10);
    CHECK(es.eigenvalues().maxCoeff() <= 10.0 + 1e-8);
  }

  TEST_CASE("generation is bitwise deterministic per seed") {
    InstanceSeedSpec spec{77, 24, 0.1, 10.0, 1};
    Matrix a = structured_psd(spec);
    Matrix b = structured_psd(spec);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("identity quadratic exposes the expected constants") {
    InstanceSeedSpec spec{5, 2, 1.0, 1.0, 0};
    MinProblem p = make_quadratic_min(spec, 0.0);
    CHECK(p.smoothness() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.modulus() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.minimizer().norm() <= 1e-12);
    CHECK(p.min_value() == doctest::Approx(0.0));
  }

  TEST_CASE("solvable system attaches the exact minimizer") {
    Vector b(2);
    b << 2, 0;
    MinProblem p(Matrix::Identity(2, 2), b, Domain::free(2));
    CHECK((p.minimizer() - b).norm() <= 1e-12);
    CHECK(p.value(p.minimizer()) == doctest::Approx(0.0));
  }

  TEST_CASE("rank-deficient system attaches the minimum-norm solution") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = 2;
    Vector b(2);
    b << 2, 0;
    MinProblem p(A, b, Domain::free(2));
    CHECK(p.minimizer()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.minimizer()[1]) <= 1e-12);
    CHECK(p.grad(p.minimizer()).norm() <= 1e-8 * std::max(1.0, b.norm()));
    CHECK(p.modulus() == 0.0);
  }

  TEST_CASE("bilinear values and partial gradients") {
    MinimaxProblem g = MinimaxProblem::bilinear(Matrix::Identity(2, 2), 5.0);
    Vector x(2), y(2);
    x << 1, 0;
    y << 0, 1;
    CHECK(g.value(x, y) == doctest::Approx(0.0));
    CHECK((g.grad_x(x, y) - y).norm() == 0.0);
    CHECK((g.grad_y(x, y) - x).norm() == 0.0);

    MinimaxProblem g1 = MinimaxProblem::bilinear(Matrix::Identity(1, 1), 5.0);
    Vector one(1);
    one << 1;
    CHECK(g1.value(one, one) == doctest::Approx(1.0));
    CHECK(g1.grad_x(one, one)[0] == doctest::Approx(1.0));
    CHECK(g1.grad_y(one, one)[0] == doctest::Approx(1.0));
    CHECK(g1.grad_x(g1.saddle_x(), g1.saddle_y()).norm() == 0.0);
    CHECK(g1.grad_y(g1.saddle_x(), g1.saddle_y()).norm() == 0.0);
  }

  TEST_CASE("strongly convex-concave quadratic constants") {
    MinimaxProblem dec = MinimaxProblem::scsc_quadratic(Matrix::Zero(2, 2), 1.0, 3.0);
    CHECK(dec.smoothness() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dec.condition_number() == doctest::Approx(1.0).epsilon(1e-9));

    MinimaxProblem c = MinimaxProblem::scsc_quadratic(Matrix::Identity(1, 1), 1.0, 3.0);
    CHECK(c.smoothness() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(c.condition_number() == doctest::Approx(2.0).epsilon(1e-9));
    Vector one(1);
    one << 1;
    CHECK(c.grad_x(one, one)[0] == doctest::Approx(2.0));
    CHECK(c.grad_y(one, one)[0] == doctest::Approx(0.0));
  }

  TEST_CASE("invalid game parameters are input errors") {
    InstanceSeedSpec spec{4, 3, 0.5, 2.0, 0};
    CHECK_THROWS_AS(make_bilinear_game(spec, 0.0), InputError);
    CHECK_THROWS_AS(make_scsc_quadratic(spec, 0.0, 1.0), InputError);
    CHECK_THROWS_AS(make_quadratic_min(spec, -1.0), InputError);
  }

  TEST_CASE("spec serialization regenerates instances bit-exactly") {
    ProblemSpec s;
    s.kind = "quadratic_min";
    s.instance = {123456, 12, 0.1, 10.0, 1};
    s.b_scale = 10.0;
    ProblemSpec back = ProblemSpec::from_json(s.to_json());
    MinProblem p1 = s.build_min();
    MinProblem p2 = back.build_min();
    CHECK((p1.matrix() - p2.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p1.rhs() - p2.rhs()).cwiseAbs().maxCoeff() == 0.0);

    ProblemSpec sg;
    sg.kind = "scsc_quadratic";
    sg.instance = {9, 6, 0.2, 2.0, 0};
    sg.mu = 0.7;
    sg.radius = 2.5;
    ProblemSpec backg = ProblemSpec::from_json(sg.to_json());
    CHECK((sg.build_minimax().matrix() - backg.build_minimax().matrix())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(backg.build_minimax().ball_radius() == 2.5);
  }

  TEST_CASE("gradient operator is smoothness-Lipschitz and monotone") {
    InstanceSeedSpec spec{31, 10, 0.3, 6.0, 0};
    MinProblem p = make_quadratic_min(spec, 2.0);
    Rng rng(substream(31, "pairs"));
    for (int i = 0; i < 1000; ++i) {
      Vector a = rng.gaussian_vector(10), b = rng.gaussian_vector(10);
      Vector dg = p.grad(a) - p.grad(b);
      CHECK(dg.norm() <= (p.smoothness() + 1e-8) * (a - b).norm());
      CHECK(dg.dot(a - b) >= -1e-10);
    }
  }
}
