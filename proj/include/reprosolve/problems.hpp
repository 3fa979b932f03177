#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "reprosolve/domain.hpp"

namespace reprosolve {

// Smooth objective for minimization solvers. Gradients here are the true
// first-order information; oracles add inexactness on top.
class ScalarObjective {
 public:
  virtual ~ScalarObjective() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector grad(const Vector& x) const = 0;
  virtual double smoothness() const = 0;       // Lipschitz constant of the gradient
  virtual double modulus() const = 0;          // strong-convexity modulus (0 if none)
  virtual const Domain& domain() const = 0;
};

// Smooth convex-concave saddle objective.
class SaddleObjective {
 public:
  virtual ~SaddleObjective() = default;
  virtual double value(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_x(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_y(const Vector& x, const Vector& y) const = 0;
  virtual double smoothness() const = 0;  // Lipschitz constant of (gx, -gy)
  virtual double modulus() const = 0;     // strong-convexity-concavity modulus
  virtual const Domain& domain_x() const = 0;
  virtual const Domain& domain_y() const = 0;
};

struct InstanceSeedSpec {
  std::uint64_t seed = 0;
  int dim = 0;
  double eig_lo = 0;
  double eig_hi = 0;
  int zero_count = 0;
  void validate() const;
};

// A = U diag(sigma) U^T with U Haar-orthogonal (QR of a seeded Gaussian matrix
// with the R-diagonal sign fix), `zero_count` zero eigenvalues and the rest
// uniform in [eig_lo, eig_hi]. Deterministic per seed.
Matrix structured_psd(const InstanceSeedSpec& spec);

// F(x) = 0.5 ||Ax - b||^2
class MinProblem final : public ScalarObjective {
 public:
  MinProblem(Matrix A, Vector b, Domain domain);

  double value(const Vector& x) const override;
  Vector grad(const Vector& x) const override;
  double smoothness() const override { return smoothness_; }
  double modulus() const override { return modulus_; }
  const Domain& domain() const override { return domain_; }

  bool has_minimizer() const { return minimizer_.has_value(); }
  const Vector& minimizer() const;
  double min_value() const;

  const Matrix& matrix() const { return A_; }
  const Vector& rhs() const { return b_; }

 private:
  Matrix A_;
  Vector b_;
  Domain domain_;
  double smoothness_ = 0;
  double modulus_ = 0;
  std::optional<Vector> minimizer_;
  double min_value_ = 0;
};

class MinimaxProblem final : public SaddleObjective {
 public:
  enum class Kind { Bilinear, ScscQuadratic };

  // F(x, y) = x^T A y on ball(0, radius) x ball(0, radius)
  static MinimaxProblem bilinear(Matrix A, double radius);
  // F(x, y) = (mu/2)||x||^2 + x^T A y - (mu/2)||y||^2 on the same balls
  static MinimaxProblem scsc_quadratic(Matrix A, double mu, double radius);

  double value(const Vector& x, const Vector& y) const override;
  Vector grad_x(const Vector& x, const Vector& y) const override;
  Vector grad_y(const Vector& x, const Vector& y) const override;
  double smoothness() const override { return smoothness_; }
  double modulus() const override { return mu_; }
  const Domain& domain_x() const override { return dom_x_; }
  const Domain& domain_y() const override { return dom_y_; }

  Kind kind() const { return kind_; }
  const Matrix& matrix() const { return A_; }
  double ball_radius() const { return radius_; }
  double condition_number() const;
  bool has_saddle() const { return true; }
  Vector saddle_x() const { return Vector::Zero(A_.rows()); }
  Vector saddle_y() const { return Vector::Zero(A_.cols()); }

 private:
  MinimaxProblem() = default;
  Kind kind_ = Kind::Bilinear;
  Matrix A_;
  double mu_ = 0;
  double radius_ = 0;
  double smoothness_ = 0;
  Domain dom_x_ = Domain::free(1);
  Domain dom_y_ = Domain::free(1);
};

MinProblem make_quadratic_min(const InstanceSeedSpec& spec, double b_scale);
MinimaxProblem make_bilinear_game(const InstanceSeedSpec& spec, double radius);
MinimaxProblem make_scsc_quadratic(const InstanceSeedSpec& spec, double mu,
                                   double radius);

// F(x) + (r/2)||x - anchor||^2
class AnchoredScalar final : public ScalarObjective {
 public:
  AnchoredScalar(const ScalarObjective& base, double r, Vector anchor);
  double value(const Vector& x) const override;
  Vector grad(const Vector& x) const override;
  double smoothness() const override { return base_->smoothness() + r_; }
  double modulus() const override { return base_->modulus() + r_; }
  const Domain& domain() const override { return base_->domain(); }
  double r() const { return r_; }
  const Vector& anchor() const { return anchor_; }
  const ScalarObjective& base() const { return *base_; }

 private:
  const ScalarObjective* base_;
  double r_;
  Vector anchor_;
};

// F(x, y) + (r/2)||x - ax||^2 - (r/2)||y - ay||^2
class AnchoredSaddle final : public SaddleObjective {
 public:
  AnchoredSaddle(const SaddleObjective& base, double r, Vector ax, Vector ay);
  double value(const Vector& x, const Vector& y) const override;
  Vector grad_x(const Vector& x, const Vector& y) const override;
  Vector grad_y(const Vector& x, const Vector& y) const override;
  double smoothness() const override { return base_->smoothness() + r_; }
  double modulus() const override { return base_->modulus() + r_; }
  const Domain& domain_x() const override { return base_->domain_x(); }
  const Domain& domain_y() const override { return base_->domain_y(); }
  double r() const { return r_; }
  const Vector& anchor_x() const { return ax_; }
  const Vector& anchor_y() const { return ay_; }
  const SaddleObjective& base() const { return *base_; }

 private:
  const SaddleObjective* base_;
  double r_;
  Vector ax_, ay_;
};

// Serializable description of a generated instance; regeneration is bit-exact.
struct ProblemSpec {
  std::string kind;  // "quadratic_min" | "bilinear" | "scsc_quadratic"
  InstanceSeedSpec instance;
  double b_scale = 0;  // quadratic_min
  double mu = 0;       // scsc_quadratic
  double radius = 0;   // minimax ball radius
  bool is_minimax() const { return kind != "quadratic_min"; }
  nlohmann::json to_json() const;
  static ProblemSpec from_json(const nlohmann::json& j);
  MinProblem build_min() const;
  MinimaxProblem build_minimax() const;
};

}  // namespace reprosolve
