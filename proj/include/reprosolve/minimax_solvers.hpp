#pragma once

#include <functional>

#include "reprosolve/metrics.hpp"
#include "reprosolve/oracles.hpp"
#include "reprosolve/solver_run.hpp"

namespace reprosolve {

struct MinimaxSolverParams {
  double stepsize = 0;  // <= 0: policy default
  long long iters = 0;
  enum class Policy { Lipschitz, CubeRoot } policy = Policy::Lipschitz;
  enum class Output { Average, Last } output = Output::Average;
  double delta_hint = 0;    // cube-root stepsize: min{1/l, (delta/(2 l^2 T))^(1/3)}
  double epsilon_hint = 0;  // sgda preset 1/(l epsilon T)
  std::function<bool(long long, const Vector&)> stop;  // polled at ticks
  std::vector<long long> ticks;
};

// Simultaneous projected descent-ascent; averaged output over t = 0..T-1.
SolverRun gda(const SaddleObjective& f, JointOracle& oracle, const JointPoint& z0,
              const MinimaxSolverParams& params);

// Same update with a stochastic oracle; rejects deterministic oracles.
SolverRun sgda(const SaddleObjective& f, JointOracle& oracle, const JointPoint& z0,
               const MinimaxSolverParams& params);

// Extragradient; output averages the extrapolation (half-step) iterates.
SolverRun eg(const SaddleObjective& f, JointOracle& oracle, const JointPoint& z0,
             const MinimaxSolverParams& params);

// Fixed-stepsize last-iterate methods for strongly-convex-concave objectives.
// GDA uses stepsize mu/(4 l^2); EG uses 1/(2 l).
SolverRun inexact_gda_scsc(const SaddleObjective& f, JointOracle& oracle,
                           const JointPoint& z0, const MinimaxSolverParams& params);
SolverRun inexact_eg_scsc(const SaddleObjective& f, JointOracle& oracle,
                          const JointPoint& z0, const MinimaxSolverParams& params);

struct RegMinimaxParams {
  double r = 0;
  double eps_r = 0;  // > 0 enables the linear-gap certificate stopping rule
  enum class Base { Eg, InexactEgScsc, Gda, InexactGdaScsc } base =
      Base::InexactEgScsc;
  double stepsize = 0;
  long long max_iters = 0;  // 0: budget from the base rate and the log term
  double delta_hint = 0;    // oracle inexactness, for the budget's log term
};

// Anchored regularization: solve F_r = F + (r/2)||x-x0||^2 - (r/2)||y-y0||^2
// until sup_z' grad F_r(z)^T (z - z') <= eps_r (exact certificate on ball
// domains), then return the last iterate.
SolverRun reg_minimax(const SaddleObjective& f, JointOracle& oracle,
                      const JointPoint& z0, const RegMinimaxParams& params);

struct PpmParams {
  double alpha = 0;
  double eps_hat = 0;
  long long outer_iters = 0;
  enum class Inner { Eg, Gda, InexactEgScsc, InexactGdaScsc } inner = Inner::Eg;
  long long inner_cap = 0;  // 0: derived
  double delta_hint = 0;
};

// Proximal-point outer loop: each round anchors at the previous iterate with
// modulus 1/alpha and solves to certificate eps_hat; output averages the
// accepted subproblem solutions.
SolverRun inexact_ppm(const SaddleObjective& f, JointOracle& oracle,
                      const JointPoint& z0, const PpmParams& params);

struct SurrogateResult {
  JointPoint mapped;
  double certificate_leading;  // 2 sqrt(2) beta D ||z_hat - z*|| (needs saddle)
  double certificate_delta;    // sqrt(2) delta D ((2 + sqrt 2) sqrt(beta/mu) + 3)
};

// One projected step of stepsize 1/beta from z_hat with oracle gradients,
// plus the distance-based certificate ingredients.
SurrogateResult surrogate_map(const SaddleObjective& f, JointOracle& oracle,
                              const JointPoint& z_hat, double beta,
                              const Vector* saddle = nullptr, double delta = 0);

}  // namespace reprosolve
