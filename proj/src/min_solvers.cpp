#include "reprosolve/min_solvers.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace reprosolve {

double agd_momentum_coefficient(double smoothness, double modulus) {
  if (!(modulus > 0) || !(smoothness >= modulus))
    throw ConfigError("agd momentum: need 0 < modulus <= smoothness");
  double q = std::sqrt(modulus / smoothness);
  return (2.0 - q) / (2.0 + q);
}

namespace {

struct Recorder {
  explicit Recorder(const MinSolverParams& p) {
    ticks = p.ticks.empty() ? checkpoint_schedule(p.iters) : p.ticks;
  }
  std::vector<long long> ticks;
  std::size_t next = 0;
  void record(SolverRun* run, long long t, const Vector& x) {
    while (next < ticks.size() && ticks[next] < t) ++next;
    if (next < ticks.size() && ticks[next] == t) {
      run->ticks.push_back(t);
      run->iterates.push_back(x);
      ++next;
    }
  }
};

void require_feasible(const ScalarObjective& f, const Vector& x0) {
  if (!f.domain().contains(x0, 1e-9))
    throw InputError("solver: start point is infeasible");
}

// stepsize 0 means "use the method default"; negative is a config error
double resolve_stepsize(double requested, double fallback) {
  if (requested < 0) throw ConfigError("solver: stepsize must be positive");
  double alpha = requested > 0 ? requested : fallback;
  if (!(alpha > 0)) throw ConfigError("solver: stepsize must be positive");
  return alpha;
}

}  // namespace

SolverRun gd(const ScalarObjective& f, MinOracle& oracle, const Vector& x0,
             const MinSolverParams& params) {
  require_feasible(f, x0);
  double alpha = resolve_stepsize(params.stepsize, 1.0 / f.smoothness());

  SolverRun run;
  Recorder rec(params);
  long long base_calls = oracle.calls();
  Vector x = x0;
  rec.record(&run, 0, x);
  long long t = 0;
  for (; t < params.iters; ++t) {
    x = f.domain().project(x - alpha * oracle.grad(x));
    rec.record(&run, t + 1, x);
    if (params.stop && !run.ticks.empty() && run.ticks.back() == t + 1 &&
        params.stop(t + 1, x)) {
      ++t;
      break;
    }
  }
  run.iterations = t;
  run.output = x;
  run.oracle_calls = oracle.calls() - base_calls;
  return run;
}

SolverRun inexact_agd(const ScalarObjective& f, MinOracle& oracle,
                      const Vector& x0, const MinSolverParams& params) {
  require_feasible(f, x0);
  double s = params.smoothness > 0 ? params.smoothness : f.smoothness();
  double beta = 0;
  if (params.momentum == MinSolverParams::Momentum::StronglyConvex) {
    double m = params.modulus > 0 ? params.modulus : f.modulus();
    beta = agd_momentum_coefficient(s, m);
  }
  double alpha = resolve_stepsize(
      params.stepsize, params.momentum == MinSolverParams::Momentum::StronglyConvex
                           ? 1.0 / (2.0 * s)
                           : 1.0 / s);

  SolverRun run;
  Recorder rec(params);
  long long base_calls = oracle.calls();
  Vector x = x0;
  Vector y = x0;
  rec.record(&run, 0, x);
  long long t = 0;
  for (; t < params.iters; ++t) {
    Vector x_next = f.domain().project(y - alpha * oracle.grad(y));
    double b = params.momentum == MinSolverParams::Momentum::StronglyConvex
                   ? beta
                   : static_cast<double>(t) / static_cast<double>(t + 3);
    y = x_next + b * (x_next - x);
    x = std::move(x_next);
    rec.record(&run, t + 1, x);
    if (params.stop && !run.ticks.empty() && run.ticks.back() == t + 1 &&
        params.stop(t + 1, x)) {
      ++t;
      break;
    }
  }
  run.iterations = t;
  run.output = x;
  run.oracle_calls = oracle.calls() - base_calls;
  return run;
}

std::optional<std::pair<Vector, double>> reg_subproblem_optimum(
    const MinProblem& problem, double r, const Vector& anchor) {
  const Matrix& A = problem.matrix();
  const Vector& b = problem.rhs();
  const int d = static_cast<int>(A.cols());
  Matrix H = A.transpose() * A;
  Vector rhs = A.transpose() * b + r * anchor;
  Matrix Hr = H + r * Matrix::Identity(d, d);
  AnchoredScalar fr(problem, r, anchor);

  auto solve_shifted = [&](double nu, const Vector& extra) {
    Matrix M = Hr + nu * Matrix::Identity(d, d);
    return Vector(M.ldlt().solve(rhs + extra));
  };

  switch (problem.domain().kind()) {
    case Domain::Kind::Free: {
      Vector x = solve_shifted(0, Vector::Zero(d));
      return std::make_pair(x, fr.value(x));
    }
    case Domain::Kind::Ball: {
      const Vector& c = problem.domain().center();
      double R = problem.domain().radius();
      Vector x = solve_shifted(0, Vector::Zero(d));
      if ((x - c).norm() <= R) return std::make_pair(x, fr.value(x));
      // boundary solution: radial search on the shift nu >= 0 with
      // x(nu) = (H + (r+nu) I)^{-1} (rhs + nu c), ||x(nu) - c|| = R
      double lo = 0, hi = 1;
      while ((solve_shifted(hi, hi * c) - c).norm() > R && hi < 1e18) hi *= 2;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if ((solve_shifted(mid, mid * c) - c).norm() > R)
          lo = mid;
        else
          hi = mid;
      }
      Vector xb = problem.domain().project(solve_shifted(hi, hi * c));
      return std::make_pair(xb, fr.value(xb));
    }
    default:
      return std::nullopt;
  }
}

SolverRun reg_min(const MinProblem& problem, MinOracle& oracle, const Vector& x0,
                  const RegMinParams& params) {
  double ell = problem.smoothness();
  if (!(params.r > 0) || params.r < 1e-14 * ell)
    throw ConfigError("reg_min: r is degenerate relative to the smoothness");
  if (params.eps_r <= 0 && params.max_iters <= 0)
    throw ConfigError("reg_min: need eps_r > 0 or an explicit budget");

  AnchoredScalar fr(problem, params.r, x0);
  AnchoredMinOracle anchored(oracle, params.r, x0);
  const double s = fr.smoothness();
  const double m = fr.modulus();

  auto opt = reg_subproblem_optimum(problem, params.r, x0);

  long long budget = params.max_iters;
  if (budget <= 0) {
    double gap0;
    if (opt) {
      gap0 = fr.value(x0) - opt->second + 0.25 * params.r * (x0 - opt->first).squaredNorm();
    } else if (problem.domain().bounded()) {
      double diam = problem.domain().diameter();
      gap0 = 0.5 * s * diam * diam;
    } else {
      throw ConfigError("reg_min: no closed-form gap and no budget available");
    }
    double logs = std::log(std::max(gap0, params.eps_r * 2.72) / params.eps_r) + 2.0;
    double factor = params.base == RegMinParams::Base::InexactAgd
                        ? 2.0 * std::sqrt(s / m)
                        : s / m;
    budget = static_cast<long long>(std::ceil(factor * logs)) + 16;
  }

  MinSolverParams base;
  base.iters = budget;
  base.stepsize = params.stepsize;
  base.smoothness = s;
  base.modulus = m;
  double achieved = std::numeric_limits<double>::quiet_NaN();
  if (params.eps_r > 0 && opt) {
    base.stop = [&](long long, const Vector& x) {
      achieved = fr.value(x) - opt->second;
      return achieved <= params.eps_r;
    };
  }

  SolverRun run = params.base == RegMinParams::Base::InexactAgd
                      ? inexact_agd(fr, anchored, x0, base)
                      : gd(fr, anchored, x0, base);
  if (opt) {
    achieved = fr.value(run.output) - opt->second;
    run.certificate = achieved;
    run.budget_exceeded = params.eps_r > 0 && achieved > params.eps_r;
  }
  return run;
}

}  // namespace reprosolve
