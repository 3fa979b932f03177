#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reprosolve/minimax_solvers.hpp"
#include "reprosolve/min_solvers.hpp"

namespace reprosolve {

enum class Protocol { TwoRun, ReferenceRun };
enum class Channel { Initialization, DeterministicGradient, StochasticGradient };

std::string to_string(Protocol p);
std::string to_string(Channel c);
Protocol protocol_from_string(const std::string& s);
Channel channel_from_string(const std::string& s);

struct AlgorithmSpec {
  std::string name;       // gd agd reg_gd reg_agd gda sgda eg reg_eg reg_gda
                          // ppm inexact_gda inexact_eg
  nlohmann::json params;  // free-form, validated when the run is assembled
  nlohmann::json to_json() const;
  static AlgorithmSpec from_json(const nlohmann::json& j);
};

struct ExperimentConfig {
  std::string experiment_id;
  ProblemSpec problem;
  OracleSpec oracle;  // seed field ignored; seeds come from the protocol
  AlgorithmSpec algorithm;
  Protocol protocol = Protocol::TwoRun;
  Channel channel = Channel::DeterministicGradient;
  std::uint64_t master_seed = 1;
  int repeats = 1;
  std::vector<long long> checkpoints;  // empty: the default schedule

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  // FNV-1a of the canonical (sorted-key) serialization
  std::string config_hash() const;
};

// Substream derivation per (master seed, role, run index). Shared roles use
// index 0 for both runs; the channel's own role gets distinct indices.
struct SeedPlan {
  std::uint64_t problem_seed = 0;
  std::uint64_t u0_seed = 0;
  std::array<std::uint64_t, 2> init_seed{};
  std::array<std::uint64_t, 2> grad_seed{};
  std::array<std::uint64_t, 2> noise_seed{};
  std::array<std::uint64_t, 2> run_seed{};  // the live seed per run
};
SeedPlan seed_protocol(const ExperimentConfig& config, int repeat = 0);

struct Report {
  std::string experiment_id;
  std::string config_hash;
  std::string algo;
  std::string channel_name;
  std::string gap_metric;  // "f_gap" or "duality_gap"
  double delta = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t problem_seed = 0;
  std::array<std::uint64_t, 2> run_seeds{};

  std::vector<long long> ticks;                  // shared checkpoint ticks
  std::array<std::vector<double>, 2> gap_series; // per run, at output points
  std::array<std::vector<double>, 2> dist_series;
  std::vector<double> deviation_sq_series;       // on output points
  std::vector<double> raw_deviation_sq_series;   // on raw iterates

  double final_deviation_sq = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 2> final_gap{std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN()};
  std::array<long long, 2> oracle_calls{};
  double slope_gap = std::numeric_limits<double>::quiet_NaN();
  double slope_deviation = std::numeric_limits<double>::quiet_NaN();

  int repeats = 1;
  double deviation_mean = std::numeric_limits<double>::quiet_NaN();
  double deviation_stderr = std::numeric_limits<double>::quiet_NaN();

  bool incomplete = false;
  double achieved_certificate = std::numeric_limits<double>::quiet_NaN();
  double wall_time_sec = 0;  // never serialized; outputs stay byte-stable

  nlohmann::json to_json() const;
  // long format: experiment_id,algo,channel,delta,run,t,metric,value,seed
  void append_csv(std::string* out) const;
  static std::string csv_header();
};

Report run_two_run(const ExperimentConfig& config);
Report run_reference(const ExperimentConfig& config);
Report run_experiment(const ExperimentConfig& config);

// Runs every config (each with its own derived streams); results in input
// order regardless of completion order. Per-entry failures are recorded as
// incomplete reports; the sweep itself always completes.
std::vector<Report> sweep(const std::vector<ExperimentConfig>& configs, int jobs);

// shortest round-trip decimal form, locale-independent
std::string format_double(double v);

}  // namespace reprosolve
