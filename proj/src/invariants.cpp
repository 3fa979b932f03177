#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reprosolve/acceptance.hpp"

namespace reprosolve {

namespace {

using Clock = std::chrono::steady_clock;

CriterionResult check(const std::string& id, const std::string& name,
                      const std::function<std::pair<bool, std::string>()>& body) {
  auto t0 = Clock::now();
  CriterionResult r{id, name, false, "", 0, ""};
  try {
    auto [ok, detail] = body();
    r.passed = ok;
    r.details = detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.details = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::uint64_t iseed(const char* role, std::uint64_t idx = 0) {
  return substream(kAcceptanceSeed ^ 0xA5A5A5A5ull, role, idx);
}

Domain random_domain(Rng* rng, int* dim_out) {
  int pick = static_cast<int>(rng->next_u64() % 3);
  if (pick == 0) {
    int d = 2 + static_cast<int>(rng->next_u64() % 6);
    *dim_out = d;
    return Domain::free(d);
  }
  if (pick == 1) {
    int d = 2 + static_cast<int>(rng->next_u64() % 6);
    *dim_out = d;
    return Domain::ball(rng->gaussian_vector(d), 0.3 + 2 * rng->next_unit());
  }
  int d1 = 1 + static_cast<int>(rng->next_u64() % 3);
  int d2 = 1 + static_cast<int>(rng->next_u64() % 3);
  *dim_out = d1 + d2;
  return Domain::product({Domain::ball(rng->gaussian_vector(d1), 0.5 + rng->next_unit()),
                          Domain::ball(rng->gaussian_vector(d2), 0.5 + rng->next_unit())});
}

Vector feasible_point(const Domain& dom, Rng* rng) {
  return dom.project(rng->gaussian_vector(dom.dim()) * 2.0);
}

}  // namespace

std::vector<CriterionResult> run_invariants() {
  std::vector<CriterionResult> out;

  out.push_back(check("I1", "projection optimality and idempotency", [] {
    Rng rng(iseed("proj"));
    double worst = -1;
    for (int i = 0; i < 1000; ++i) {
      int d = 0;
      Domain dom = random_domain(&rng, &d);
      Vector p = rng.gaussian_vector(d) * 3.0;
      Vector q = feasible_point(dom, &rng);
      Vector pp = dom.project(p);
      if (!dom.contains(pp)) return std::make_pair(false, std::string("projection left the domain"));
      if ((dom.project(pp) - pp).norm() != 0.0)
        return std::make_pair(false, std::string("projection not exactly idempotent"));
      worst = std::max(worst, (pp - p).norm() - (q - p).norm());
    }
    return std::make_pair(worst <= 1e-12,
                          "worst ||P(p)-p|| - ||q-p|| = " + format_double(worst));
  }));

  out.push_back(check("I2", "analytic gradients match central differences", [] {
    InstanceSeedSpec mi{iseed("fd_min"), 6, 0.3, 3.0, 0};
    MinProblem mp = make_quadratic_min(mi, 2.0);
    InstanceSeedSpec xi{iseed("fd_scsc"), 5, 0.2, 2.0, 0};
    MinimaxProblem xp = make_scsc_quadratic(xi, 0.7, 3.0);
    Rng rng(iseed("fd_pts"));
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      Vector x = rng.gaussian_vector(6);
      double h = 1e-5 * (1.0 + x.norm());
      Vector g = mp.grad(x);
      Vector fdg(6);
      for (int i = 0; i < 6; ++i) {
        Vector e = Vector::Zero(6);
        e[i] = h;
        fdg[i] = (mp.value(x + e) - mp.value(x - e)) / (2 * h);
      }
      worst = std::max(worst, (fdg - g).norm() / std::max(1.0, g.norm()));

      Vector u = rng.gaussian_vector(5), v = rng.gaussian_vector(5);
      double hu = 1e-5 * (1.0 + u.norm());
      Vector gx = xp.grad_x(u, v), gy = xp.grad_y(u, v);
      Vector fx(5), fy(5);
      for (int i = 0; i < 5; ++i) {
        Vector e = Vector::Zero(5);
        e[i] = hu;
        fx[i] = (xp.value(u + e, v) - xp.value(u - e, v)) / (2 * hu);
        fy[i] = (xp.value(u, v + e) - xp.value(u, v - e)) / (2 * hu);
      }
      worst = std::max(worst, (fx - gx).norm() / std::max(1.0, gx.norm()));
      worst = std::max(worst, (fy - gy).norm() / std::max(1.0, gy.norm()));
    }
    return std::make_pair(worst <= 1e-6, "worst relative error " + format_double(worst));
  }));

  out.push_back(check("I3", "operator smoothness and monotonicity", [] {
    InstanceSeedSpec xi{iseed("op"), 8, 0.2, 5.0, 1};
    MinimaxProblem game = make_bilinear_game(xi, 2.0);
    double ell = game.smoothness();
    Rng rng(iseed("op_pts"));
    auto tilde = [&](const Vector& z) {
      JointPoint jp = JointPoint::split(z, 8);
      Vector g(16);
      g << game.grad_x(jp.x, jp.y), -game.grad_y(jp.x, jp.y);
      return g;
    };
    double worst_lip = 0, worst_mono = 0;
    for (int k = 0; k < 1000; ++k) {
      Vector z1(16), z2(16);
      z1.head(8) = rng.ball_point(8, 2.0);
      z1.tail(8) = rng.ball_point(8, 2.0);
      z2.head(8) = rng.ball_point(8, 2.0);
      z2.tail(8) = rng.ball_point(8, 2.0);
      Vector dg = tilde(z1) - tilde(z2);
      double dz = (z1 - z2).norm();
      worst_lip = std::max(worst_lip, dg.norm() - (ell + 1e-8) * dz);
      worst_mono = std::max(worst_mono, -dg.dot(z1 - z2));
    }
    bool ok = worst_lip <= 0 && worst_mono <= 1e-10;
    return std::make_pair(ok, "lipschitz excess " + format_double(worst_lip) +
                                  ", monotonicity defect " + format_double(worst_mono));
  }));

  out.push_back(check("I4", "seeded generation is bit-exact", [] {
    InstanceSeedSpec s{iseed("det"), 24, 0.1, 10.0, 1};
    Matrix a = structured_psd(s);
    Matrix b = structured_psd(s);
    bool same = (a - b).cwiseAbs().maxCoeff() == 0.0;
    MinProblem p1 = make_quadratic_min(s, 3.0);
    MinProblem p2 = make_quadratic_min(s, 3.0);
    same = same && (p1.rhs() - p2.rhs()).cwiseAbs().maxCoeff() == 0.0;
    return std::make_pair(same, std::string(same ? "identical" : "differs"));
  }));

  out.push_back(check("I5", "oracle budget compliance and determinism", [] {
    InstanceSeedSpec s{iseed("oracle"), 12, 0.5, 4.0, 0};
    MinProblem p = make_quadratic_min(s, 1.0);
    Rng rng(iseed("oracle_pts"));
    for (auto mode : {GradMode::FixedDirection, GradMode::PointHash}) {
      OracleSpec spec{OracleKind::InexactGrad, 0.37, mode, iseed("oracle_seed")};
      InexactMinOracle o1(p, spec), o2(p, spec);
      for (int k = 0; k < 200; ++k) {
        Vector x = rng.gaussian_vector(12);
        Vector g1 = o1.grad(x);
        if (std::abs((g1 - p.grad(x)).norm() - 0.37) > 1e-12)
          return std::make_pair(false, std::string("perturbation norm off budget"));
        if ((g1 - o2.grad(x)).cwiseAbs().maxCoeff() != 0.0)
          return std::make_pair(false, std::string("replay not bit-identical"));
      }
    }
    return std::make_pair(true, std::string("max error == delta, replay bit-identical"));
  }));

  out.push_back(check("I6", "gd monotone descent at stepsize 1/l", [] {
    InstanceSeedSpec s{iseed("gd"), 10, 0.3, 5.0, 0};
    MinProblem p = make_quadratic_min(s, 2.0);
    OracleSpec exact{OracleKind::Exact, 0, GradMode::FixedDirection, 0};
    InexactMinOracle oracle(p, exact);
    Rng rng(iseed("gd_x0"));
    Vector x = rng.gaussian_vector(10);
    double prev = p.value(x);
    double alpha = 1.0 / p.smoothness();
    for (int t = 0; t < 500; ++t) {
      x = x - alpha * oracle.grad(x);
      double cur = p.value(x);
      if (cur > prev + 1e-12)
        return std::make_pair(false, "ascent at t=" + std::to_string(t));
      prev = cur;
    }
    return std::make_pair(true, std::string("monotone over 500 steps"));
  }));

  out.push_back(check("I7", "linear gap dominates probed duality differences", [] {
    InstanceSeedSpec s{iseed("dom"), 6, 0.2, 3.0, 1};
    MinimaxProblem game = make_bilinear_game(s, 1.5);
    Domain joint = joint_domain(game.domain_x(), game.domain_y());
    Rng rng(iseed("dom_pts"));
    double worst = -1e300;
    for (int k = 0; k < 300; ++k) {
      Vector zx = rng.ball_point(6, 1.5), zy = rng.ball_point(6, 1.5);
      Vector z(12);
      z << zx, zy;
      Vector g(12);
      g << game.grad_x(zx, zy), -game.grad_y(zx, zy);
      double cert = linear_gap(g, z, joint);
      for (int j = 0; j < 20; ++j) {
        Vector px = rng.ball_point(6, 1.5), py = rng.ball_point(6, 1.5);
        double diff = game.value(zx, py) - game.value(px, zy);
        worst = std::max(worst, diff - cert);
      }
    }
    return std::make_pair(worst <= 1e-10,
                          "worst probe excess " + format_double(worst));
  }));

  out.push_back(check("I8", "two-run replay produces identical bytes", [] {
    ProblemSpec prob;
    prob.kind = "bilinear";
    prob.instance = {0, 6, 0.1, 4.0, 0};
    prob.radius = 1.0;
    ExperimentConfig cfg;
    cfg.experiment_id = "invariant_replay";
    cfg.problem = prob;
    cfg.oracle = {OracleKind::StochasticGrad, 0.2, GradMode::FixedDirection, 0};
    cfg.algorithm = {"sgda", nlohmann::json{{"iters", 256}, {"epsilon", 0.2}}};
    cfg.protocol = Protocol::TwoRun;
    cfg.channel = Channel::StochasticGradient;
    cfg.master_seed = iseed("replay");
    cfg.repeats = 3;
    std::string c1, c2;
    run_two_run(cfg).append_csv(&c1);
    run_two_run(cfg).append_csv(&c2);
    return std::make_pair(c1 == c2 && !c1.empty(),
                          "csv bytes " + std::to_string(c1.size()));
  }));

  return out;
}

}  // namespace reprosolve
