#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reprosolve/cli_app.hpp"
#include "reprosolve/harness.hpp"
#include "reprosolve/figures.hpp"

using namespace reprosolve;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"reprosolve"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "reprosolve_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

json smoke_config() {
  return json{
      {"experiment_id", "cli_smoke"},
      {"problem", {{"kind", "bilinear"}, {"d", 6}, {"eig_lo", 0.1},
                   {"eig_hi", 4.0}, {"zeros", 0}, {"D", 1.0}}},
      {"oracle", {{"kind", "inexact_grad"}, {"delta", 0.1},
                  {"grad_mode", "fixed_direction"}}},
      {"algorithm", {{"name", "gda"}, {"params", {{"iters", 300}}}}},
      {"protocol", "two_run"},
      {"channel", "deterministic_gradient"},
      {"master_seed", 99},
      {"repeats", 1}};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run writes the three artifact groups and exits cleanly") {
    fs::path dir = fresh_dir("run_ok");
    put(dir / "config.json", smoke_config().dump(2));
    fs::path out = dir / "out";
    CHECK(cli({"run", "--config", (dir / "config.json").string(), "--out",
               out.string()}) == 0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "series.csv"));
    CHECK(fs::exists(out / "plotdata" / "deviation.csv"));
    CHECK(fs::exists(out / "plotdata" / "gap_run0.csv"));
    json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep.at("final_deviation_sq").get<double>() > 0.0);
  }

  TEST_CASE("delta override zeroes the deterministic deviation") {
    fs::path dir = fresh_dir("run_override");
    put(dir / "config.json", smoke_config().dump(2));
    fs::path out = dir / "out";
    CHECK(cli({"run", "--config", (dir / "config.json").string(), "--out",
               out.string(), "--set", "oracle.delta=0"}) == 0);
    json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep.at("final_deviation_sq").get<double>() == 0.0);
  }

  TEST_CASE("missing and malformed configs exit with code 2") {
    fs::path dir = fresh_dir("run_bad");
    CHECK(cli({"run", "--config", (dir / "nope.json").string(), "--out",
               (dir / "out").string()}) == 2);
    put(dir / "broken.json", "{ not json");
    CHECK(cli({"run", "--config", (dir / "broken.json").string(), "--out",
               (dir / "out").string()}) == 2);
    put(dir / "config.json", smoke_config().dump());
    CHECK(cli({"run", "--config", (dir / "config.json").string(), "--out",
               (dir / "out").string(), "--set", "oracle.nope=1"}) == 2);
    CHECK(cli({"run", "--config", (dir / "config.json").string(), "--out",
               (dir / "out").string(), "--set", "oracle.delta=squid"}) == 2);
  }

  TEST_CASE("budget-exceeded runs exit with code 3") {
    fs::path dir = fresh_dir("run_budget");
    json cfg = smoke_config();
    cfg["algorithm"] = {{"name", "reg_eg"},
                        {"params", {{"r", 0.4}, {"eps_r", 1e-18}, {"iters", 30}}}};
    put(dir / "config.json", cfg.dump());
    CHECK(cli({"run", "--config", (dir / "config.json").string(), "--out",
               (dir / "out").string()}) == 3);
    CHECK(fs::exists(dir / "out" / "report.json"));
  }

  TEST_CASE("outputs are byte-deterministic across invocations") {
    fs::path dir = fresh_dir("run_det");
    put(dir / "config.json", smoke_config().dump());
    fs::path o1 = dir / "o1", o2 = dir / "o2";
    REQUIRE(cli({"run", "--config", (dir / "config.json").string(), "--out",
                 o1.string()}) == 0);
    REQUIRE(cli({"run", "--config", (dir / "config.json").string(), "--out",
                 o2.string()}) == 0);
    CHECK(slurp(o1 / "series.csv") == slurp(o2 / "series.csv"));
    CHECK(slurp(o1 / "report.json") == slurp(o2 / "report.json"));
    CHECK(!slurp(o1 / "series.csv").empty());
  }

  TEST_CASE("series csv round-trips byte-identically through parse") {
    fs::path dir = fresh_dir("run_roundtrip");
    put(dir / "config.json", smoke_config().dump());
    fs::path out = dir / "out";
    REQUIRE(cli({"run", "--config", (dir / "config.json").string(), "--out",
                 out.string()}) == 0);
    std::string csv = slurp(out / "series.csv");
    // parse every row into typed fields, then re-serialize the numerics
    std::string rebuilt;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header) {
        rebuilt += line + "\n";
        header = false;
        continue;
      }
      std::vector<std::string> fields;
      std::istringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      REQUIRE(fields.size() == 9);
      fields[3] = format_double(std::stod(fields[3]));  // delta
      fields[7] = format_double(std::stod(fields[7]));  // value
      for (std::size_t i = 0; i < fields.size(); ++i)
        rebuilt += (i ? "," : "") + fields[i];
      rebuilt += "\n";
    }
    CHECK(rebuilt == csv);
  }

  TEST_CASE("sweep fans out configs and stays order-deterministic") {
    fs::path dir = fresh_dir("sweep");
    json a = smoke_config();
    json b = smoke_config();
    b["experiment_id"] = "cli_smoke_b";
    b["master_seed"] = 100;
    put(dir / "configs.json", json::array({a, b}).dump());
    fs::path o1 = dir / "o1", o2 = dir / "o2";
    CHECK(cli({"sweep", "--config", (dir / "configs.json").string(), "--out",
               o1.string(), "--jobs", "1"}) == 0);
    CHECK(cli({"sweep", "--config", (dir / "configs.json").string(), "--out",
               o2.string(), "--jobs", "8"}) == 0);
    CHECK(fs::exists(o1 / "0_cli_smoke" / "report.json"));
    CHECK(fs::exists(o1 / "1_cli_smoke_b" / "report.json"));
    CHECK(slurp(o1 / "sweep.csv") == slurp(o2 / "sweep.csv"));
  }

  TEST_CASE("figure presets emit eight csv series and two svg panels") {
    auto files = make_figure("min_inexact_grad", kDefaultFigureSeed);
    int csvs = 0, svgs = 0;
    for (const auto& f : files) {
      if (f.relative_path.ends_with(".csv")) ++csvs;
      if (f.relative_path.ends_with(".svg")) ++svgs;
      CHECK(!f.bytes.empty());
    }
    CHECK(csvs == 8);
    CHECK(svgs == 2);
    auto again = make_figure("min_inexact_grad", kDefaultFigureSeed);
    REQUIRE(files.size() == again.size());
    for (std::size_t i = 0; i < files.size(); ++i)
      CHECK(files[i].bytes == again[i].bytes);
    CHECK_THROWS(make_figure("no_such_figure", 1));
  }

  TEST_CASE("verify runs the invariants suite hermetically") {
    fs::path dir = fresh_dir("verify");
    CHECK(cli({"verify", "--suite", "invariants", "--out", dir.string()}) == 0);
    CHECK(fs::exists(dir / "verify_invariants.txt"));
    CHECK(cli({"verify", "--suite", "no_such_suite"}) == 2);
  }

  TEST_CASE("bundled example configs parse and execute") {
#ifdef REPRO_CONFIG_DIR
    fs::path src(REPRO_CONFIG_DIR);
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(src)) {
      if (entry.path().extension() != ".json") continue;
      ++seen;
      json j = json::parse(slurp(entry.path()));
      ExperimentConfig cfg = ExperimentConfig::from_json(j);
      // shrink the budgets so the smoke pass stays fast
      if (cfg.algorithm.params.contains("iters"))
        cfg.algorithm.params["iters"] = 64;
      cfg.repeats = std::min(cfg.repeats, 2);
      Report rep = run_experiment(cfg);
      CHECK(rep.config_hash.size() == 16);
    }
    CHECK(seen == 6);
#endif
  }

  TEST_CASE("unknown flags and missing subcommands exit with code 2") {
    CHECK(cli({"frobnicate"}) == 2);
    CHECK(cli({"run", "--config"}) == 2);
    CHECK(cli({"figures", "--figure", "nope", "--out", "/tmp/x"}) == 2);
  }
}
