#pragma once

#include <functional>
#include <optional>

#include "reprosolve/oracles.hpp"
#include "reprosolve/solver_run.hpp"

namespace reprosolve {

struct MinSolverParams {
  double stepsize = 0;   // <= 0: method default
  long long iters = 0;
  // Effective constants for the accelerated update; 0 means take them from
  // the objective. The momentum coefficient is
  // (2 - sqrt(m/s)) / (2 + sqrt(m/s)) for modulus m and smoothness s.
  double smoothness = 0;
  double modulus = 0;
  enum class Momentum { StronglyConvex, ConvexNesterov } momentum =
      Momentum::StronglyConvex;
  // Early-stop hook, polled at checkpoint ticks with the current iterate.
  std::function<bool(long long, const Vector&)> stop;
  std::vector<long long> ticks;  // custom schedule; empty: checkpoint_schedule(iters)
};

double agd_momentum_coefficient(double smoothness, double modulus);

// Projected gradient descent, last iterate. Default stepsize 1/smoothness.
SolverRun gd(const ScalarObjective& f, MinOracle& oracle, const Vector& x0,
             const MinSolverParams& params);

// Accelerated two-line update
//   x_{t+1} = P(y_t - a G(y_t)),  y_{t+1} = x_{t+1} + beta (x_{t+1} - x_t)
// with a = 1/(2 s) and constant beta for the strongly convex mode, or
// a = 1/s and beta_t = t/(t+3) for the plain convex mode.
SolverRun inexact_agd(const ScalarObjective& f, MinOracle& oracle,
                      const Vector& x0, const MinSolverParams& params);

struct RegMinParams {
  double r = 0;
  double eps_r = 0;  // > 0 enables the subproblem-gap stopping rule
  enum class Base { Gd, InexactAgd } base = Base::InexactAgd;
  double stepsize = 0;
  long long max_iters = 0;  // 0: budget derived from the base method's rate
};

// Closed-form minimizer of F + (r/2)||x - anchor||^2 over free or ball
// domains of a quadratic problem; nullopt when no closed form applies.
std::optional<std::pair<Vector, double>> reg_subproblem_optimum(
    const MinProblem& problem, double r, const Vector& anchor);

// Anchored-regularization wrapper: solve F_r = F + (r/2)||x - x0||^2 with the
// base solver until the F_r-gap certificate reaches eps_r or the budget ends.
SolverRun reg_min(const MinProblem& problem, MinOracle& oracle, const Vector& x0,
                  const RegMinParams& params);

}  // namespace reprosolve
