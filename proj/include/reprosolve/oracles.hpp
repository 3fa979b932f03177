#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reprosolve/problems.hpp"

namespace reprosolve {

enum class OracleKind { Exact, InexactInit, InexactGrad, StochasticGrad };
enum class GradMode { FixedDirection, PaperLiteralOnes, PointHash };

std::string to_string(OracleKind k);
std::string to_string(GradMode m);
OracleKind oracle_kind_from_string(const std::string& s);
GradMode grad_mode_from_string(const std::string& s);

struct OracleSpec {
  OracleKind kind = OracleKind::Exact;
  double delta = 0.0;
  GradMode grad_mode = GradMode::FixedDirection;
  std::uint64_t seed = 0;
  void validate() const;
  nlohmann::json to_json() const;
  static OracleSpec from_json(const nlohmann::json& j);
};

struct InitDraw {
  Vector reference;  // u0
  Vector start;      // x0 (or stacked (x0, y0))
  double offset_norm = 0;
};

// Start point within delta/2 of the reference, projected feasible.
InitDraw draw_init(const OracleSpec& spec, const Domain& domain, const Vector& u0);

// Additive gradient perturbation on R^dim, per oracle kind/mode.
class Perturbation {
 public:
  Perturbation(const OracleSpec& spec, int dim);
  // For stochastic oracles every call advances the stream.
  Vector noise(const Vector& query);
  Perturbation clone_with_subseed(std::uint64_t index) const;
  const OracleSpec& spec() const { return spec_; }

 private:
  OracleSpec spec_;
  int dim_;
  Vector direction_;  // fixed unit direction, drawn once per instance
  Rng stream_;
};

class MinOracle {
 public:
  virtual ~MinOracle() = default;
  virtual Vector grad(const Vector& x) = 0;
  virtual long long calls() const = 0;
  virtual OracleKind kind() const = 0;
};

class JointOracle {
 public:
  virtual ~JointOracle() = default;
  // (G_x, G_y); one call per joint query
  virtual std::pair<Vector, Vector> grad(const Vector& x, const Vector& y) = 0;
  virtual long long calls() const = 0;
  virtual OracleKind kind() const = 0;
};

// Simulated inexact oracle around an objective's true gradient.
class InexactMinOracle final : public MinOracle {
 public:
  InexactMinOracle(const ScalarObjective& f, const OracleSpec& spec);
  Vector grad(const Vector& x) override;
  long long calls() const override { return calls_; }
  OracleKind kind() const override;

 private:
  const ScalarObjective* f_;
  Perturbation pert_;
  long long calls_ = 0;
};

class InexactJointOracle final : public JointOracle {
 public:
  InexactJointOracle(const SaddleObjective& f, const OracleSpec& spec);
  std::pair<Vector, Vector> grad(const Vector& x, const Vector& y) override;
  long long calls() const override { return calls_; }
  OracleKind kind() const override;

 private:
  const SaddleObjective* f_;
  Perturbation pert_;
  long long calls_ = 0;
};

// G_r(x) = G(x) + r (x - anchor); the anchor term costs no oracle calls.
class AnchoredMinOracle final : public MinOracle {
 public:
  AnchoredMinOracle(MinOracle& base, double r, Vector anchor);
  Vector grad(const Vector& x) override;
  long long calls() const override;
  OracleKind kind() const override;

 private:
  MinOracle* base_;
  double r_;
  Vector anchor_;
};

// G_r(x, y) = (G_x + r (x - ax), G_y - r (y - ay))
class AnchoredJointOracle final : public JointOracle {
 public:
  AnchoredJointOracle(JointOracle& base, double r, Vector ax, Vector ay);
  std::pair<Vector, Vector> grad(const Vector& x, const Vector& y) override;
  long long calls() const override;
  OracleKind kind() const override;

 private:
  JointOracle* base_;
  double r_;
  Vector ax_, ay_;
};

// Deterministic kinds: max ||G - grad F|| over the samples.
// Stochastic kind: sample mean of ||noise||^2.
double audit_inexactness(const OracleSpec& spec, const ScalarObjective& f,
                         const std::vector<Vector>& sample_points);
double audit_inexactness(const OracleSpec& spec, const SaddleObjective& f,
                         const std::vector<std::pair<Vector, Vector>>& samples);

}  // namespace reprosolve
