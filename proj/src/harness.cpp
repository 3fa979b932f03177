#include "reprosolve/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <memory>
#include <thread>

#include <nlohmann/json.hpp>

namespace reprosolve {

using nlohmann::json;

std::string to_string(Protocol p) {
  return p == Protocol::TwoRun ? "two_run" : "reference_run";
}

std::string to_string(Channel c) {
  switch (c) {
    case Channel::Initialization: return "initialization";
    case Channel::DeterministicGradient: return "deterministic_gradient";
    case Channel::StochasticGradient: return "stochastic_gradient";
  }
  return "deterministic_gradient";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "two_run") return Protocol::TwoRun;
  if (s == "reference_run") return Protocol::ReferenceRun;
  throw ConfigError("config: unknown protocol '" + s + "'");
}

Channel channel_from_string(const std::string& s) {
  if (s == "initialization") return Channel::Initialization;
  if (s == "deterministic_gradient") return Channel::DeterministicGradient;
  if (s == "stochastic_gradient") return Channel::StochasticGradient;
  throw ConfigError("config: unknown channel '" + s + "'");
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json AlgorithmSpec::to_json() const {
  return json{{"name", name}, {"params", params.is_null() ? json::object() : params}};
}

AlgorithmSpec AlgorithmSpec::from_json(const json& j) {
  AlgorithmSpec a;
  a.name = j.at("name").get<std::string>();
  a.params = j.value("params", json::object());
  return a;
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ConfigError("config: repeats must be >= 1");
  oracle.validate();
  switch (channel) {
    case Channel::Initialization:
      if (oracle.kind != OracleKind::InexactInit)
        throw ConfigError("config: initialization channel needs an inexact_init oracle");
      break;
    case Channel::DeterministicGradient:
      if (oracle.kind != OracleKind::InexactGrad)
        throw ConfigError(
            "config: deterministic_gradient channel needs an inexact_grad oracle");
      break;
    case Channel::StochasticGradient:
      if (oracle.kind != OracleKind::StochasticGrad)
        throw ConfigError(
            "config: stochastic_gradient channel needs a stochastic_grad oracle");
      break;
  }
}

json ExperimentConfig::to_json() const {
  json j{{"experiment_id", experiment_id},
              {"problem", problem.to_json()},
              {"oracle", oracle.to_json()},
              {"algorithm", algorithm.to_json()},
              {"protocol", to_string(protocol)},
              {"channel", to_string(channel)},
              {"master_seed", master_seed},
              {"repeats", repeats}};
  if (!checkpoints.empty()) j["checkpoints"] = checkpoints;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.experiment_id = j.value("experiment_id", std::string("experiment"));
  c.problem = ProblemSpec::from_json(j.at("problem"));
  c.oracle = OracleSpec::from_json(j.at("oracle"));
  c.algorithm = AlgorithmSpec::from_json(j.at("algorithm"));
  c.protocol = protocol_from_string(j.value("protocol", std::string("two_run")));
  c.channel = channel_from_string(
      j.value("channel", std::string("deterministic_gradient")));
  c.master_seed = j.value("master_seed", std::uint64_t{1});
  c.repeats = j.value("repeats", 1);
  if (j.contains("checkpoints"))
    c.checkpoints = j.at("checkpoints").get<std::vector<long long>>();
  c.validate();
  return c;
}

std::string ExperimentConfig::config_hash() const {
  std::uint64_t h = detail::fnv1a(to_json().dump());
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[i] = hex[(h >> (60 - 4 * i)) & 0xF];
  buf[16] = '\0';
  return std::string(buf);
}

SeedPlan seed_protocol(const ExperimentConfig& config, int repeat) {
  SeedPlan plan;
  const std::uint64_t m = config.master_seed;
  plan.problem_seed = substream(m, "problem");
  plan.u0_seed = substream(m, "u0");
  const auto k = static_cast<std::uint64_t>(repeat);
  for (std::uint64_t i = 0; i < 2; ++i) {
    plan.init_seed[i] = substream(
        m, "init", config.channel == Channel::Initialization ? 2 * k + i : 0);
    plan.grad_seed[i] = substream(
        m, "grad", config.channel == Channel::DeterministicGradient ? 2 * k + i : 0);
    plan.noise_seed[i] = substream(
        m, "noise", config.channel == Channel::StochasticGradient ? 2 * k + i : 0);
    switch (config.channel) {
      case Channel::Initialization: plan.run_seed[i] = plan.init_seed[i]; break;
      case Channel::DeterministicGradient: plan.run_seed[i] = plan.grad_seed[i]; break;
      case Channel::StochasticGradient: plan.run_seed[i] = plan.noise_seed[i]; break;
    }
  }
  return plan;
}

namespace {

Vector draw_u0(const Domain& dom, std::uint64_t seed) {
  if (!dom.bounded()) return Vector::Zero(dom.dim());
  Rng rng(substream(seed, "u0_draw"));
  Vector u(dom.dim());
  for (const auto& b : dom.ball_blocks())
    u.segment(b.offset, b.dim) = b.center + rng.ball_point(b.dim, b.radius / 2.0);
  return u;
}

double jnum(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number())
    throw ConfigError(std::string("algorithm params: '") + key + "' must be numeric");
  return p.at(key).get<double>();
}

long long jint(const json& p, const char* key, long long fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number())
    throw ConfigError(std::string("algorithm params: '") + key + "' must be numeric");
  return p.at(key).get<long long>();
}

double jreq(const json& p, const char* key) {
  if (!p.contains(key))
    throw ConfigError(std::string("algorithm params: missing '") + key + "'");
  return jnum(p, key, 0);
}

SolverRun exec_min(const MinProblem& pb, const AlgorithmSpec& algo,
                   const OracleSpec& spec, const Vector& x0,
                   const std::vector<long long>& ticks) {
  const json& p = algo.params;
  InexactMinOracle oracle(pb, spec);
  if (algo.name == "gd") {
    MinSolverParams mp;
    mp.ticks = ticks;
    mp.stepsize = jnum(p, "stepsize", 0);
    mp.iters = jint(p, "iters", 0);
    return gd(pb, oracle, x0, mp);
  }
  if (algo.name == "agd") {
    MinSolverParams mp;
    mp.ticks = ticks;
    mp.stepsize = jnum(p, "stepsize", 0);
    mp.iters = jint(p, "iters", 0);
    std::string mom = p.value("momentum", std::string("auto"));
    if (mom == "convex" || (mom == "auto" && pb.modulus() <= 0))
      mp.momentum = MinSolverParams::Momentum::ConvexNesterov;
    else
      mp.momentum = MinSolverParams::Momentum::StronglyConvex;
    return inexact_agd(pb, oracle, x0, mp);
  }
  if (algo.name == "reg_gd" || algo.name == "reg_agd") {
    RegMinParams rp;
    rp.r = jreq(p, "r");
    rp.eps_r = jnum(p, "eps_r", 0);
    rp.stepsize = jnum(p, "stepsize", 0);
    rp.max_iters = jint(p, "iters", 0);
    rp.base = algo.name == "reg_gd" ? RegMinParams::Base::Gd
                                    : RegMinParams::Base::InexactAgd;
    return reg_min(pb, oracle, x0, rp);
  }
  throw ConfigError("config: unknown minimization algorithm '" + algo.name + "'");
}

MinimaxSolverParams::Output joutput(const json& p) {
  std::string s = p.value("output", std::string("average"));
  if (s == "average") return MinimaxSolverParams::Output::Average;
  if (s == "last") return MinimaxSolverParams::Output::Last;
  throw ConfigError("algorithm params: output must be 'average' or 'last'");
}

SolverRun exec_minimax(const MinimaxProblem& pb, const AlgorithmSpec& algo,
                       const OracleSpec& spec, const JointPoint& z0,
                       const std::vector<long long>& ticks) {
  const json& p = algo.params;
  InexactJointOracle oracle(pb, spec);
  if (algo.name == "gda" || algo.name == "sgda") {
    MinimaxSolverParams mp;
    mp.ticks = ticks;
    mp.stepsize = jnum(p, "stepsize", 0);
    mp.iters = jint(p, "iters", 0);
    mp.output = joutput(p);
    mp.epsilon_hint = jnum(p, "epsilon", 0);
    return algo.name == "gda" ? gda(pb, oracle, z0, mp) : sgda(pb, oracle, z0, mp);
  }
  if (algo.name == "eg") {
    MinimaxSolverParams mp;
    mp.ticks = ticks;
    mp.stepsize = jnum(p, "stepsize", 0);
    mp.iters = jint(p, "iters", 0);
    mp.output = joutput(p);
    std::string policy = p.value("policy", std::string("lipschitz"));
    if (policy == "cube_root")
      mp.policy = MinimaxSolverParams::Policy::CubeRoot;
    else if (policy != "lipschitz")
      throw ConfigError("algorithm params: unknown eg policy '" + policy + "'");
    mp.delta_hint = spec.delta;
    return eg(pb, oracle, z0, mp);
  }
  if (algo.name == "inexact_gda" || algo.name == "inexact_eg") {
    MinimaxSolverParams mp;
    mp.ticks = ticks;
    mp.stepsize = jnum(p, "stepsize", 0);
    mp.iters = jint(p, "iters", 0);
    return algo.name == "inexact_gda" ? inexact_gda_scsc(pb, oracle, z0, mp)
                                      : inexact_eg_scsc(pb, oracle, z0, mp);
  }
  if (algo.name == "reg_eg" || algo.name == "reg_gda") {
    RegMinimaxParams rp;
    rp.r = jreq(p, "r");
    rp.eps_r = jnum(p, "eps_r", 0);
    rp.stepsize = jnum(p, "stepsize", 0);
    rp.max_iters = jint(p, "iters", 0);
    rp.delta_hint = spec.delta;
    rp.base = algo.name == "reg_eg" ? RegMinimaxParams::Base::InexactEgScsc
                                    : RegMinimaxParams::Base::InexactGdaScsc;
    return reg_minimax(pb, oracle, z0, rp);
  }
  if (algo.name == "ppm") {
    PpmParams pp;
    pp.alpha = jreq(p, "alpha");
    pp.eps_hat = jreq(p, "eps_hat");
    pp.outer_iters = jint(p, "outer_iters", 0);
    pp.inner_cap = jint(p, "inner_cap", 0);
    pp.delta_hint = spec.delta;
    std::string inner = p.value("inner", std::string("eg"));
    if (inner == "eg")
      pp.inner = PpmParams::Inner::Eg;
    else if (inner == "gda")
      pp.inner = PpmParams::Inner::Gda;
    else
      throw ConfigError("algorithm params: unknown ppm inner '" + inner + "'");
    return inexact_ppm(pb, oracle, z0, pp);
  }
  throw ConfigError("config: unknown minimax algorithm '" + algo.name + "'");
}

// measurement points: running averages where the output is averaged
const std::vector<Vector>& measure_points(const SolverRun& run) {
  return run.averages.empty() ? run.iterates : run.averages;
}

struct ProblemBundle {
  std::unique_ptr<MinProblem> min;
  std::unique_ptr<MinimaxProblem> minimax;
  Domain domain = Domain::free(1);  // joint domain for minimax
};

ProblemBundle build_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
  ProblemSpec spec = cfg.problem;
  if (spec.instance.seed == 0) spec.instance.seed = seed;
  ProblemBundle b;
  if (spec.is_minimax()) {
    b.minimax = std::make_unique<MinimaxProblem>(spec.build_minimax());
    b.domain = joint_domain(b.minimax->domain_x(), b.minimax->domain_y());
  } else {
    b.min = std::make_unique<MinProblem>(spec.build_min());
    b.domain = b.min->domain();
  }
  return b;
}

void fill_metric_series(const ExperimentConfig& cfg, const ProblemBundle& pb,
                        const SolverRun& run, std::vector<double>* gap,
                        std::vector<double>* dist) {
  const auto& pts = measure_points(run);
  for (const auto& z : pts) {
    if (pb.min) {
      gap->push_back(optimality_gap(*pb.min, z));
      dist->push_back((z - pb.min->minimizer()).norm());
    } else {
      const auto& mx = *pb.minimax;
      JointPoint jp = JointPoint::split(z, mx.domain_x().dim());
      if (mx.kind() == MinimaxProblem::Kind::Bilinear)
        gap->push_back(duality_gap_bilinear(mx, jp.x, jp.y));
      else
        gap->push_back(duality_gap_estimate(mx, jp.x, jp.y, 512).value);
      Vector star(z.size());
      star << mx.saddle_x(), mx.saddle_y();
      dist->push_back((z - star).norm());
    }
  }
  (void)cfg;
}

struct RunPair {
  SolverRun a, b;
};

RunPair execute_pair(const ExperimentConfig& cfg, const ProblemBundle& pb,
                     const SeedPlan& plan, bool reference_mode) {
  const Vector u0 = draw_u0(pb.domain, plan.u0_seed);
  RunPair pair;
  for (int i = 0; i < 2; ++i) {
    OracleSpec spec = cfg.oracle;
    spec.seed = reference_mode ? plan.run_seed[0] : plan.run_seed[i];
    if (reference_mode && i == 0) spec.delta = 0;
    Vector start = u0;
    if (cfg.channel == Channel::Initialization)
      start = draw_init(spec, pb.domain, u0).start;
    SolverRun run;
    if (pb.min)
      run = exec_min(*pb.min, cfg.algorithm, spec, start, cfg.checkpoints);
    else
      run = exec_minimax(*pb.minimax, cfg.algorithm, spec,
                         JointPoint::split(start, pb.minimax->domain_x().dim()),
                         cfg.checkpoints);
    (i == 0 ? pair.a : pair.b) = std::move(run);
  }
  return pair;
}

double tail_slope(const std::vector<long long>& ticks,
                  const std::vector<double>& values) {
  if (ticks.empty() || values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> pts;
  long long t_max = ticks[std::min(ticks.size(), values.size()) - 1];
  double lo = std::max<double>(10, static_cast<double>(t_max) / 10.0);
  for (std::size_t i = 0; i < std::min(ticks.size(), values.size()); ++i)
    if (ticks[i] >= lo && values[i] > 0)
      pts.emplace_back(static_cast<double>(ticks[i]), values[i]);
  try {
    return rate_slope(pts);
  } catch (const InputError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

Report assemble_report(const ExperimentConfig& cfg) {
  auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  const bool reference_mode = cfg.protocol == Protocol::ReferenceRun;

  Report rep;
  rep.experiment_id = cfg.experiment_id;
  rep.config_hash = cfg.config_hash();
  rep.algo = cfg.algorithm.name;
  rep.channel_name = to_string(cfg.channel);
  rep.delta = cfg.oracle.delta;
  rep.master_seed = cfg.master_seed;

  SeedPlan plan0 = seed_protocol(cfg, 0);
  rep.problem_seed =
      cfg.problem.instance.seed != 0 ? cfg.problem.instance.seed : plan0.problem_seed;
  ProblemBundle pb = build_problem(cfg, plan0.problem_seed);
  rep.gap_metric = pb.min ? "f_gap" : "duality_gap";

  std::vector<double> final_devs;
  for (int k = 0; k < cfg.repeats; ++k) {
    SeedPlan plan = seed_protocol(cfg, k);
    RunPair pair = execute_pair(cfg, pb, plan, reference_mode);
    const auto& pa = measure_points(pair.a);
    const auto& pb_pts = measure_points(pair.b);
    double fdev = deviation_sq(pair.a.output, pair.b.output);
    final_devs.push_back(fdev);
    if (k == 0) {
      rep.run_seeds = {plan.run_seed[0],
                       reference_mode ? plan.run_seed[0] : plan.run_seed[1]};
      std::size_t n = std::min({pair.a.ticks.size(), pair.b.ticks.size()});
      rep.ticks.assign(pair.a.ticks.begin(), pair.a.ticks.begin() + n);
      for (std::size_t i = 0; i < n; ++i) {
        rep.deviation_sq_series.push_back(deviation_sq(pa[i], pb_pts[i]));
        rep.raw_deviation_sq_series.push_back(
            deviation_sq(pair.a.iterates[i], pair.b.iterates[i]));
      }
      fill_metric_series(cfg, pb, pair.a, &rep.gap_series[0], &rep.dist_series[0]);
      fill_metric_series(cfg, pb, pair.b, &rep.gap_series[1], &rep.dist_series[1]);
      rep.final_deviation_sq = fdev;
      for (int i = 0; i < 2; ++i) {
        const SolverRun& run = i == 0 ? pair.a : pair.b;
        rep.oracle_calls[i] = run.oracle_calls;
        if (pb.min)
          rep.final_gap[i] = optimality_gap(*pb.min, run.output);
        else {
          JointPoint jp = run.output_joint();
          rep.final_gap[i] =
              pb.minimax->kind() == MinimaxProblem::Kind::Bilinear
                  ? duality_gap_bilinear(*pb.minimax, jp.x, jp.y)
                  : duality_gap_estimate(*pb.minimax, jp.x, jp.y, 512).value;
        }
        if (run.budget_exceeded) {
          rep.incomplete = true;
          if (std::isnan(rep.achieved_certificate) ||
              run.certificate > rep.achieved_certificate)
            rep.achieved_certificate = run.certificate;
        }
      }
      rep.slope_gap = tail_slope(rep.ticks, rep.gap_series[1]);
      rep.slope_deviation = tail_slope(rep.ticks, rep.deviation_sq_series);
    }
  }

  rep.repeats = cfg.repeats;
  double mean = 0;
  for (double v : final_devs) mean += v;
  mean /= static_cast<double>(final_devs.size());
  rep.deviation_mean = mean;
  if (final_devs.size() > 1) {
    double ss = 0;
    for (double v : final_devs) ss += (v - mean) * (v - mean);
    rep.deviation_stderr = std::sqrt(
        ss / (static_cast<double>(final_devs.size()) - 1.0) /
        static_cast<double>(final_devs.size()));
  }
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

}  // namespace

Report run_two_run(const ExperimentConfig& config) {
  if (config.protocol != Protocol::TwoRun)
    throw ConfigError("run_two_run: config protocol is not two_run");
  return assemble_report(config);
}

Report run_reference(const ExperimentConfig& config) {
  if (config.protocol != Protocol::ReferenceRun)
    throw ConfigError("run_reference: config protocol is not reference_run");
  return assemble_report(config);
}

Report run_experiment(const ExperimentConfig& config) {
  return config.protocol == Protocol::TwoRun ? run_two_run(config)
                                             : run_reference(config);
}

std::vector<Report> sweep(const std::vector<ExperimentConfig>& configs, int jobs) {
  if (configs.empty()) throw InputError("sweep: empty config list");
  jobs = std::max(1, jobs);
  std::vector<Report> out(configs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        out[i] = run_experiment(configs[i]);
      } catch (const std::exception&) {
        Report rep;
        rep.experiment_id = configs[i].experiment_id;
        rep.algo = configs[i].algorithm.name;
        rep.incomplete = true;
        out[i] = std::move(rep);
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(jobs, static_cast<int>(configs.size()));
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

nlohmann::json Report::to_json() const {
  json j;
  j["experiment_id"] = experiment_id;
  j["config_hash"] = config_hash;
  j["algo"] = algo;
  j["channel"] = channel_name;
  j["gap_metric"] = gap_metric;
  j["delta"] = delta;
  j["master_seed"] = master_seed;
  j["problem_seed"] = problem_seed;
  j["run_seeds"] = run_seeds;
  j["ticks"] = ticks;
  j["gap_series_run0"] = gap_series[0];
  j["gap_series_run1"] = gap_series[1];
  j["dist_series_run0"] = dist_series[0];
  j["dist_series_run1"] = dist_series[1];
  j["deviation_sq_series"] = deviation_sq_series;
  j["raw_deviation_sq_series"] = raw_deviation_sq_series;
  j["final_deviation_sq"] = final_deviation_sq;
  j["final_gap_run0"] = final_gap[0];
  j["final_gap_run1"] = final_gap[1];
  j["oracle_calls_run0"] = oracle_calls[0];
  j["oracle_calls_run1"] = oracle_calls[1];
  j["slope_gap"] = slope_gap;
  j["slope_deviation"] = slope_deviation;
  j["repeats"] = repeats;
  j["deviation_mean"] = deviation_mean;
  j["deviation_stderr"] = deviation_stderr;
  j["incomplete"] = incomplete;
  j["achieved_certificate"] = achieved_certificate;
  return j;
}

std::string Report::csv_header() {
  return "experiment_id,algo,channel,delta,run,t,metric,value,seed\n";
}

void Report::append_csv(std::string* out) const {
  auto row = [&](const std::string& run, long long t, const std::string& metric,
                 double value, std::uint64_t seed) {
    if (std::isnan(value)) return;
    *out += experiment_id;
    *out += ',';
    *out += algo;
    *out += ',';
    *out += channel_name;
    *out += ',';
    *out += format_double(delta);
    *out += ',';
    *out += run;
    *out += ',';
    *out += std::to_string(t);
    *out += ',';
    *out += metric;
    *out += ',';
    *out += format_double(value);
    *out += ',';
    *out += std::to_string(seed);
    *out += '\n';
  };
  const std::string dist_name = gap_metric == "f_gap" ? "dist_to_opt" : "dist_to_saddle";
  for (int i = 0; i < 2; ++i) {
    const std::string run = std::to_string(i);
    for (std::size_t k = 0; k < gap_series[i].size() && k < ticks.size(); ++k)
      row(run, ticks[k], gap_metric, gap_series[i][k], run_seeds[i]);
    for (std::size_t k = 0; k < dist_series[i].size() && k < ticks.size(); ++k)
      row(run, ticks[k], dist_name, dist_series[i][k], run_seeds[i]);
    if (!ticks.empty()) {
      row(run, ticks.back(), gap_metric + "_final", final_gap[i], run_seeds[i]);
      row(run, ticks.back(), "oracle_calls",
          static_cast<double>(oracle_calls[i]), run_seeds[i]);
    }
  }
  for (std::size_t k = 0; k < deviation_sq_series.size() && k < ticks.size(); ++k) {
    row("pair", ticks[k], "deviation_sq", deviation_sq_series[k], master_seed);
    row("pair", ticks[k], "deviation", std::sqrt(std::max(0.0, deviation_sq_series[k])),
        master_seed);
  }
  for (std::size_t k = 0; k < raw_deviation_sq_series.size() && k < ticks.size(); ++k)
    row("pair", ticks[k], "raw_deviation_sq", raw_deviation_sq_series[k], master_seed);
  if (!ticks.empty()) {
    row("pair", ticks.back(), "final_deviation_sq", final_deviation_sq, master_seed);
    row("pair", ticks.back(), "deviation_mean", deviation_mean, master_seed);
    row("pair", ticks.back(), "deviation_stderr", deviation_stderr, master_seed);
  }
}

}  // namespace reprosolve
