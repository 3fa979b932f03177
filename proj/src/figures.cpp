#include "reprosolve/figures.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "reprosolve/acceptance.hpp"
#include "reprosolve/svg_plot.hpp"

namespace reprosolve {

namespace {

using nlohmann::json;

std::string two_column_csv(const std::vector<long long>& ticks,
                           const std::vector<double>& values) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < ticks.size() && i < values.size(); ++i)
    out += std::to_string(ticks[i]) + "," + format_double(values[i]) + "\n";
  return out;
}

std::vector<std::pair<double, double>> series_points(
    const std::vector<long long>& ticks, const std::vector<double>& values) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ticks.size() && i < values.size(); ++i)
    pts.emplace_back(static_cast<double>(ticks[i]), values[i]);
  return pts;
}

std::vector<NamedFile> figure_from_reports(const std::vector<std::string>& names,
                                           const std::vector<Report>& reports,
                                           const std::string& gap_label) {
  std::vector<NamedFile> files;
  SvgLinePlot convergence("convergence under inexact gradients", "iteration",
                          gap_label);
  SvgLinePlot deviation("deviation from the exact-gradient trajectory",
                        "iteration", "deviation");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const Report& rep = reports[i];
    files.push_back({names[i] + "_gap.csv",
                     two_column_csv(rep.ticks, rep.gap_series[1])});
    std::vector<double> dev_sqrt;
    dev_sqrt.reserve(rep.deviation_sq_series.size());
    for (double v : rep.deviation_sq_series)
      dev_sqrt.push_back(std::sqrt(std::max(0.0, v)));
    files.push_back({names[i] + "_deviation.csv",
                     two_column_csv(rep.ticks, dev_sqrt)});
    convergence.add_series(names[i], series_points(rep.ticks, rep.gap_series[1]));
    deviation.add_series(names[i], series_points(rep.ticks, dev_sqrt));
  }
  files.push_back({"convergence.svg", convergence.render()});
  files.push_back({"deviation.svg", deviation.render()});
  return files;
}

}  // namespace

std::vector<NamedFile> make_figure(const std::string& figure_id,
                                   std::uint64_t seed) {
  const long long T = 10000;
  if (figure_id == "min_inexact_grad") {
    ProblemSpec problem;
    problem.kind = "quadratic_min";
    problem.instance = {0, 100, 0.1, 10.0, 1};
    problem.b_scale = 10.0;
    OracleSpec oracle{OracleKind::InexactGrad, 0.1, GradMode::PaperLiteralOnes, 0};
    std::vector<std::string> names{"gd", "agd", "reg_gd", "reg_agd"};
    std::vector<ExperimentConfig> configs;
    for (const auto& n : names) {
      ExperimentConfig c;
      c.experiment_id = "fig_min_" + n;
      c.problem = problem;
      c.oracle = oracle;
      json params{{"stepsize", 0.01}, {"iters", T}};
      if (n.rfind("reg_", 0) == 0) params["r"] = 0.05;
      c.algorithm = {n, params};
      c.protocol = Protocol::ReferenceRun;
      c.channel = Channel::DeterministicGradient;
      c.master_seed = seed;
      configs.push_back(std::move(c));
    }
    return figure_from_reports(names, sweep(configs, 2), "objective gap");
  }
  if (figure_id == "minimax_inexact_grad") {
    ProblemSpec problem;
    problem.kind = "bilinear";
    problem.instance = {0, 500, 0.1, 10.0, 1};
    problem.radius = kMinimaxReplicationRadius;
    OracleSpec oracle{OracleKind::InexactGrad, 0.1, GradMode::PaperLiteralOnes, 0};
    std::vector<std::string> names{"eg", "reg_eg", "gda", "reg_gda"};
    std::vector<double> steps{0.1, 0.05, 0.001, 0.0001};
    std::vector<ExperimentConfig> configs;
    for (std::size_t i = 0; i < names.size(); ++i) {
      ExperimentConfig c;
      c.experiment_id = "fig_minimax_" + names[i];
      c.problem = problem;
      c.oracle = oracle;
      json params{{"stepsize", steps[i]}, {"iters", T}};
      if (names[i].rfind("reg_", 0) == 0) params["r"] = 0.05;
      c.algorithm = {names[i], params};
      c.protocol = Protocol::ReferenceRun;
      c.channel = Channel::DeterministicGradient;
      c.master_seed = seed;
      configs.push_back(std::move(c));
    }
    return figure_from_reports(names, sweep(configs, 2), "duality gap");
  }
  throw ConfigError("figures: unknown figure id '" + figure_id + "'");
}

}  // namespace reprosolve
