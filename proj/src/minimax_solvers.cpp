#include "reprosolve/minimax_solvers.hpp"

#include <cmath>

namespace reprosolve {

namespace {

// Stacked view of the saddle system: z = (x; y), step operator (Gx, -Gy).
struct Stacked {
  const SaddleObjective& f;
  JointOracle& oracle;
  Domain joint;
  int dx;

  Stacked(const SaddleObjective& f_, JointOracle& o)
      : f(f_),
        oracle(o),
        joint(joint_domain(f_.domain_x(), f_.domain_y())),
        dx(f_.domain_x().dim()) {}

  Vector op(const Vector& z) {
    auto [gx, gy] = oracle.grad(z.head(dx), z.tail(z.size() - dx));
    Vector g(z.size());
    g << gx, -gy;
    return g;
  }

  Vector true_op(const Vector& z) const {
    Vector x = z.head(dx), y = z.tail(z.size() - dx);
    Vector g(z.size());
    g << f.grad_x(x, y), -f.grad_y(x, y);
    return g;
  }

  Vector project(const Vector& z) const { return joint.project(z); }
};

struct Recorder {
  Recorder(const MinimaxSolverParams& p) {
    ticks = p.ticks.empty() ? checkpoint_schedule(p.iters) : p.ticks;
  }
  explicit Recorder(std::vector<long long> t) : ticks(std::move(t)) {}
  std::vector<long long> ticks;
  std::size_t next = 0;
  // returns true when t was a tick
  bool record(SolverRun* run, long long t, const Vector& z, const Vector* avg) {
    while (next < ticks.size() && ticks[next] < t) ++next;
    if (next >= ticks.size() || ticks[next] != t) return false;
    run->ticks.push_back(t);
    run->iterates.push_back(z);
    if (avg) run->averages.push_back(*avg);
    ++next;
    return true;
  }
};

Vector require_feasible_start(const Stacked& s, const JointPoint& z0) {
  Vector z = z0.stacked();
  if (!s.joint.contains(z, 1e-9))
    throw InputError("minimax solver: start point is infeasible");
  return z;
}

double gda_default_stepsize(const SaddleObjective& f, long long T) {
  return 1.0 / (f.smoothness() * std::sqrt(static_cast<double>(std::max<long long>(T, 1))));
}

double eg_stepsize(const SaddleObjective& f, const MinimaxSolverParams& p) {
  if (p.stepsize < 0) throw ConfigError("eg: stepsize must be positive");
  if (p.stepsize > 0) return p.stepsize;
  double lip = 1.0 / f.smoothness();
  if (p.policy == MinimaxSolverParams::Policy::CubeRoot && p.delta_hint > 0) {
    double l = f.smoothness();
    double T = static_cast<double>(std::max<long long>(p.iters, 1));
    return std::min(lip, std::cbrt(p.delta_hint / (2.0 * l * l * T)));
  }
  return lip;
}

SolverRun simultaneous_loop(const SaddleObjective& f, JointOracle& oracle,
                            const JointPoint& z0, const MinimaxSolverParams& params,
                            double alpha) {
  if (!(alpha > 0) || params.stepsize < 0)
    throw ConfigError("gda: stepsize must be positive");
  Stacked s(f, oracle);
  Vector z = require_feasible_start(s, z0);
  SolverRun run;
  run.x_dim = s.dx;
  Recorder rec(params);
  long long base_calls = oracle.calls();
  CompensatedSum avg;

  Vector mean = z;
  rec.record(&run, 0, z, &mean);
  long long t = 0;
  for (; t < params.iters; ++t) {
    avg.add(z);
    z = s.project(z - alpha * s.op(z));
    mean = avg.mean();
    if (rec.record(&run, t + 1, z, &mean) && params.stop && params.stop(t + 1, z)) {
      ++t;
      break;
    }
  }
  run.iterations = t;
  run.oracle_calls = oracle.calls() - base_calls;
  run.output = params.output == MinimaxSolverParams::Output::Average &&
                       avg.count() > 0
                   ? avg.mean()
                   : z;
  return run;
}

}  // namespace

SolverRun gda(const SaddleObjective& f, JointOracle& oracle, const JointPoint& z0,
              const MinimaxSolverParams& params) {
  double alpha =
      params.stepsize > 0 ? params.stepsize : gda_default_stepsize(f, params.iters);
  return simultaneous_loop(f, oracle, z0, params, alpha);
}

SolverRun sgda(const SaddleObjective& f, JointOracle& oracle, const JointPoint& z0,
               const MinimaxSolverParams& params) {
  if (oracle.kind() != OracleKind::StochasticGrad)
    throw ConfigError("sgda: oracle is deterministic; use gda");
  double alpha = params.stepsize;
  if (alpha <= 0) {
    if (params.epsilon_hint > 0)
      alpha = 1.0 / (f.smoothness() * params.epsilon_hint *
                     static_cast<double>(std::max<long long>(params.iters, 1)));
    else
      alpha = gda_default_stepsize(f, params.iters);
  }
  return simultaneous_loop(f, oracle, z0, params, alpha);
}

SolverRun eg(const SaddleObjective& f, JointOracle& oracle, const JointPoint& z0,
             const MinimaxSolverParams& params) {
  double alpha = eg_stepsize(f, params);
  if (!(alpha > 0)) throw ConfigError("eg: stepsize must be positive");
  Stacked s(f, oracle);
  Vector z = require_feasible_start(s, z0);
  SolverRun run;
  run.x_dim = s.dx;
  Recorder rec(params);
  long long base_calls = oracle.calls();
  CompensatedSum avg;  // averages the half-step iterates

  Vector mean = z;
  rec.record(&run, 0, z, &mean);
  long long t = 0;
  for (; t < params.iters; ++t) {
    Vector zh = s.project(z - alpha * s.op(z));
    avg.add(zh);
    z = s.project(z - alpha * s.op(zh));
    mean = avg.mean();
    if (rec.record(&run, t + 1, z, &mean) && params.stop && params.stop(t + 1, z)) {
      ++t;
      break;
    }
  }
  run.iterations = t;
  run.oracle_calls = oracle.calls() - base_calls;
  run.output = params.output == MinimaxSolverParams::Output::Average &&
                       avg.count() > 0
                   ? avg.mean()
                   : z;
  return run;
}

namespace {

SolverRun scsc_loop(const SaddleObjective& f, JointOracle& oracle,
                    const JointPoint& z0, const MinimaxSolverParams& params,
                    bool extragradient) {
  double mu = f.modulus();
  if (!(mu > 0)) throw ConfigError("scsc solver: modulus must be positive");
  double l = f.smoothness();
  if (params.stepsize < 0) throw ConfigError("scsc solver: stepsize must be positive");
  double alpha = params.stepsize > 0
                     ? params.stepsize
                     : (extragradient ? 1.0 / (2.0 * l) : mu / (4.0 * l * l));
  Stacked s(f, oracle);
  Vector z = require_feasible_start(s, z0);
  SolverRun run;
  run.x_dim = s.dx;
  Recorder rec(params);
  long long base_calls = oracle.calls();

  rec.record(&run, 0, z, nullptr);
  long long t = 0;
  for (; t < params.iters; ++t) {
    if (extragradient) {
      Vector zh = s.project(z - alpha * s.op(z));
      z = s.project(z - alpha * s.op(zh));
    } else {
      z = s.project(z - alpha * s.op(z));
    }
    if (rec.record(&run, t + 1, z, nullptr) && params.stop &&
        params.stop(t + 1, z)) {
      ++t;
      break;
    }
  }
  run.iterations = t;
  run.oracle_calls = oracle.calls() - base_calls;
  run.output = z;
  return run;
}

}  // namespace

SolverRun inexact_gda_scsc(const SaddleObjective& f, JointOracle& oracle,
                           const JointPoint& z0, const MinimaxSolverParams& params) {
  return scsc_loop(f, oracle, z0, params, /*extragradient=*/false);
}

SolverRun inexact_eg_scsc(const SaddleObjective& f, JointOracle& oracle,
                          const JointPoint& z0, const MinimaxSolverParams& params) {
  return scsc_loop(f, oracle, z0, params, /*extragradient=*/true);
}

namespace {

bool base_is_extragradient(RegMinimaxParams::Base b) {
  return b == RegMinimaxParams::Base::Eg ||
         b == RegMinimaxParams::Base::InexactEgScsc;
}

long long certified_budget(double smooth, double mod, double r, double diam,
                           double delta_hint) {
  double delta_eff = std::max(delta_hint, 1e-12);
  double logterm = std::ceil(std::log(std::max(1.0, r * diam / delta_eff)));
  double kappa = smooth / mod;
  return static_cast<long long>(std::ceil(32.0 * kappa * std::max(1.0, logterm))) + 128;
}

}  // namespace

SolverRun reg_minimax(const SaddleObjective& f, JointOracle& oracle,
                      const JointPoint& z0, const RegMinimaxParams& params) {
  if (!(params.r > 0)) throw ConfigError("reg_minimax: r must be positive");
  if (params.eps_r <= 0 && params.max_iters <= 0)
    throw ConfigError("reg_minimax: need eps_r > 0 or an explicit budget");

  AnchoredSaddle fr(f, params.r, z0.x, z0.y);
  AnchoredJointOracle anchored(oracle, params.r, z0.x, z0.y);
  Domain joint = joint_domain(f.domain_x(), f.domain_y());
  const bool want_certificate = params.eps_r > 0;
  if (want_certificate && !joint.bounded())
    throw ConfigError("reg_minimax: gap certificate needs bounded domains");

  long long budget = params.max_iters;
  if (budget <= 0)
    budget = certified_budget(fr.smoothness(), fr.modulus(), params.r,
                              joint.diameter(), params.delta_hint);

  MinimaxSolverParams base;
  base.iters = budget;
  base.stepsize = params.stepsize;
  base.output = MinimaxSolverParams::Output::Last;
  double achieved = std::numeric_limits<double>::quiet_NaN();
  if (want_certificate) {
    base.stop = [&](long long, const Vector& z) {
      achieved = linear_gap(
          [&] {
            Vector x = z.head(fr.domain_x().dim());
            Vector y = z.tail(fr.domain_y().dim());
            Vector g(z.size());
            g << fr.grad_x(x, y), -fr.grad_y(x, y);
            return g;
          }(),
          z, joint);
      return achieved <= params.eps_r;
    };
  }

  SolverRun run = base_is_extragradient(params.base)
                      ? inexact_eg_scsc(fr, anchored, z0, base)
                      : inexact_gda_scsc(fr, anchored, z0, base);
  if (want_certificate) {
    if (std::isnan(achieved) || run.iterations >= budget) {
      Vector z = run.output;
      Vector x = z.head(fr.domain_x().dim());
      Vector y = z.tail(fr.domain_y().dim());
      Vector g(z.size());
      g << fr.grad_x(x, y), -fr.grad_y(x, y);
      achieved = linear_gap(g, z, joint);
    }
    run.certificate = achieved;
    run.budget_exceeded = achieved > params.eps_r;
  }
  return run;
}

SolverRun inexact_ppm(const SaddleObjective& f, JointOracle& oracle,
                      const JointPoint& z0, const PpmParams& params) {
  if (!(params.alpha > 0)) throw ConfigError("inexact_ppm: alpha must be positive");
  if (!(params.eps_hat > 0))
    throw ConfigError("inexact_ppm: eps_hat must be positive");
  if (params.outer_iters <= 0)
    throw ConfigError("inexact_ppm: outer iteration count must be positive");
  Domain joint = joint_domain(f.domain_x(), f.domain_y());
  if (!joint.bounded())
    throw ConfigError("inexact_ppm: gap certificate needs bounded domains");

  const double r_prox = 1.0 / params.alpha;
  const int dx = f.domain_x().dim();
  const bool use_eg = params.inner == PpmParams::Inner::Eg ||
                      params.inner == PpmParams::Inner::InexactEgScsc;

  SolverRun run;
  run.x_dim = dx;
  long long base_calls = oracle.calls();
  CompensatedSum avg;
  double worst_cert = 0;
  bool exceeded = false;

  JointPoint zt = {f.domain_x().project(z0.x), f.domain_y().project(z0.y)};
  run.ticks.push_back(0);
  run.iterates.push_back(zt.stacked());
  run.averages.push_back(zt.stacked());

  for (long long t = 0; t < params.outer_iters; ++t) {
    AnchoredSaddle ft(f, r_prox, zt.x, zt.y);
    AnchoredJointOracle anchored(oracle, r_prox, zt.x, zt.y);

    long long cap = params.inner_cap;
    if (cap <= 0)
      cap = certified_budget(ft.smoothness(), ft.modulus(), r_prox,
                             joint.diameter(),
                             std::max(params.delta_hint, params.eps_hat * 1e-3));

    MinimaxSolverParams inner;
    inner.iters = cap;
    inner.output = MinimaxSolverParams::Output::Last;
    std::vector<long long> every(static_cast<std::size_t>(cap) + 1);
    for (long long i = 0; i <= cap; ++i) every[static_cast<std::size_t>(i)] = i;
    inner.ticks = std::move(every);
    double achieved = std::numeric_limits<double>::infinity();
    inner.stop = [&](long long, const Vector& z) {
      Vector x = z.head(dx), y = z.tail(z.size() - dx);
      Vector g(z.size());
      g << ft.grad_x(x, y), -ft.grad_y(x, y);
      achieved = linear_gap(g, z, joint);
      return achieved <= params.eps_hat;
    };

    SolverRun sub = use_eg ? inexact_eg_scsc(ft, anchored, zt, inner)
                           : inexact_gda_scsc(ft, anchored, zt, inner);
    if (achieved > params.eps_hat) exceeded = true;
    worst_cert = std::max(worst_cert, achieved);

    zt = sub.output_joint();
    avg.add(sub.output);
    run.ticks.push_back(t + 1);
    run.iterates.push_back(sub.output);
    run.averages.push_back(avg.mean());
  }

  run.iterations = params.outer_iters;
  run.oracle_calls = oracle.calls() - base_calls;
  run.output = avg.mean();
  run.certificate = worst_cert;
  run.budget_exceeded = exceeded;
  return run;
}

SurrogateResult surrogate_map(const SaddleObjective& f, JointOracle& oracle,
                              const JointPoint& z_hat, double beta,
                              const Vector* saddle, double delta) {
  double l = f.smoothness();
  if (!(beta >= 2.0 * l))
    throw ConfigError("surrogate_map: beta must be at least twice the smoothness");
  Stacked s(f, oracle);
  Vector z = z_hat.stacked();
  Vector mapped = s.project(z - (1.0 / beta) * s.op(z));

  double diam = std::max(f.domain_x().diameter(), f.domain_y().diameter());
  SurrogateResult out;
  out.mapped = JointPoint::split(mapped, s.dx);
  out.certificate_leading = std::numeric_limits<double>::quiet_NaN();
  if (saddle != nullptr)
    out.certificate_leading = 2.0 * std::sqrt(2.0) * beta * diam * (z - *saddle).norm();
  double mu = f.modulus();
  if (delta > 0 && mu > 0)
    out.certificate_delta = std::sqrt(2.0) * delta * diam *
                            ((2.0 + std::sqrt(2.0)) * std::sqrt(beta / mu) + 3.0);
  else
    out.certificate_delta = 0.0;
  return out;
}

}  // namespace reprosolve
