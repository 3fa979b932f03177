#include "reprosolve/cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reprosolve/acceptance.hpp"
#include "reprosolve/figures.hpp"

namespace reprosolve {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

void write_file(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

json load_config_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file not readable: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + " at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
}

// dotted-path override, type-checked against the existing field
void apply_override(json* root, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like key.path=value: " + assignment);
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  json* node = root;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (!node->is_object() || !node->contains(key))
      throw ConfigError("override path not in config schema: " + path);
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }

  try {
    if (node->is_number_integer() || node->is_number_unsigned())
      *node = json::parse(value).get<long long>();
    else if (node->is_number_float())
      *node = std::stod(value);
    else if (node->is_boolean())
      *node = value == "true" ? true
              : value == "false"
                  ? false
                  : throw ConfigError("boolean override needs true/false");
    else if (node->is_string())
      *node = value;
    else
      throw ConfigError("override target is not a scalar: " + path);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("override value '" + value + "' does not match the type of " +
                      path);
  }
}

struct CommonOpts {
  std::vector<std::string> config_paths;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
};

std::vector<ExperimentConfig> load_configs(const CommonOpts& opts) {
  std::vector<ExperimentConfig> configs;
  for (const auto& path : opts.config_paths) {
    json j = load_config_json(path);
    std::vector<json> entries;
    if (j.is_array())
      entries.assign(j.begin(), j.end());
    else
      entries.push_back(j);
    for (auto& entry : entries) {
      for (const auto& ov : opts.overrides) apply_override(&entry, ov);
      if (opts.seed_set) entry["master_seed"] = opts.seed;
      configs.push_back(ExperimentConfig::from_json(entry));
    }
  }
  return configs;
}

void write_report_artifacts(const fs::path& dir, const ExperimentConfig& cfg,
                            const Report& rep) {
  json j = rep.to_json();
  j["config"] = cfg.to_json();
  write_file(dir / "report.json", j.dump(2) + "\n");
  std::string csv = Report::csv_header();
  rep.append_csv(&csv);
  write_file(dir / "series.csv", csv);

  auto two_col = [&](const std::vector<double>& vals) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < rep.ticks.size() && i < vals.size(); ++i)
      out += std::to_string(rep.ticks[i]) + "," + format_double(vals[i]) + "\n";
    return out;
  };
  write_file(dir / "plotdata" / "gap_run0.csv", two_col(rep.gap_series[0]));
  write_file(dir / "plotdata" / "gap_run1.csv", two_col(rep.gap_series[1]));
  write_file(dir / "plotdata" / "deviation_sq.csv", two_col(rep.deviation_sq_series));
  std::vector<double> dev;
  for (double v : rep.deviation_sq_series) dev.push_back(std::sqrt(std::max(0.0, v)));
  write_file(dir / "plotdata" / "deviation.csv", two_col(dev));
}

int cmd_run(const CommonOpts& opts) {
  auto configs = load_configs(opts);
  if (configs.size() != 1)
    throw ConfigError("run expects exactly one experiment config");
  Report rep = run_experiment(configs[0]);
  write_report_artifacts(fs::path(opts.out_dir), configs[0], rep);
  if (rep.incomplete) {
    std::cerr << "budget exceeded; achieved certificate "
              << format_double(rep.achieved_certificate) << "\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  auto configs = load_configs(opts);
  auto reports = sweep(configs, opts.jobs);
  std::string combined = Report::csv_header();
  bool any_incomplete = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    fs::path dir = fs::path(opts.out_dir) /
                   (std::to_string(i) + "_" + configs[i].experiment_id);
    write_report_artifacts(dir, configs[i], reports[i]);
    reports[i].append_csv(&combined);
    any_incomplete = any_incomplete || reports[i].incomplete;
  }
  write_file(fs::path(opts.out_dir) / "sweep.csv", combined);
  return any_incomplete ? kExitBudget : kExitOk;
}

int cmd_figures(const std::string& figure_id, const CommonOpts& opts) {
  std::uint64_t seed = opts.seed_set ? opts.seed : kDefaultFigureSeed;
  auto files = make_figure(figure_id, seed);
  for (const auto& f : files)
    write_file(fs::path(opts.out_dir) / figure_id / f.relative_path, f.bytes);
  return kExitOk;
}

int cmd_verify(const std::string& suite, const CommonOpts& opts) {
  std::vector<CriterionResult> results;
  if (suite == "acceptance")
    results = run_acceptance();
  else if (suite == "invariants")
    results = run_invariants();
  else
    throw ConfigError("verify: unknown suite '" + suite + "'");

  std::string table = results_table(results);
  std::cout << table;
  if (!opts.out_dir.empty()) {
    write_file(fs::path(opts.out_dir) / ("verify_" + suite + ".txt"), table);
    for (const auto& r : results)
      if (!r.csv.empty())
        write_file(fs::path(opts.out_dir) / ("verify_" + suite) / (r.id + ".csv"),
                   r.csv);
  }
  return all_passed(results) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"reproducible first-order optimization experiments"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string figure_id, suite;

  auto add_common = [&](CLI::App* sub, bool needs_config, bool needs_out) {
    auto* c = sub->add_option("--config", opts.config_paths, "experiment config JSON");
    if (needs_config) c->required();
    auto* o = sub->add_option("--out", opts.out_dir, "output directory");
    if (needs_out) o->required();
    sub->add_option("--set", opts.overrides, "dotted-key override key.path=value");
    sub->add_option("--seed", opts.seed, "master seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    sub->add_option("--jobs", opts.jobs, "parallel workers");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment config");
  add_common(run_cmd, true, true);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run many configs");
  add_common(sweep_cmd, true, true);
  CLI::App* fig_cmd = app.add_subcommand("figures", "regenerate preset figure data");
  add_common(fig_cmd, false, true);
  fig_cmd->add_option("--figure", figure_id, "min_inexact_grad | minimax_inexact_grad")
      ->required();
  CLI::App* verify_cmd = app.add_subcommand("verify", "run verification suites");
  add_common(verify_cmd, false, false);
  verify_cmd->add_option("--suite", suite, "invariants | acceptance")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(opts);
    if (sweep_cmd->parsed()) return cmd_sweep(opts);
    if (fig_cmd->parsed()) return cmd_figures(figure_id, opts);
    if (verify_cmd->parsed()) return cmd_verify(suite, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace reprosolve
