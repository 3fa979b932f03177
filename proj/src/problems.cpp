#include "reprosolve/problems.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace reprosolve {

void InstanceSeedSpec::validate() const {
  if (dim <= 0) throw InputError("instance spec: dim must be positive");
  if (!(eig_lo >= 0)) throw InputError("instance spec: eig_lo must be >= 0");
  if (eig_hi < eig_lo) throw InputError("instance spec: eig_hi < eig_lo");
  if (zero_count < 0 || zero_count >= dim)
    throw InputError("instance spec: zero_count must be in [0, dim)");
}

Matrix structured_psd(const InstanceSeedSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  Rng rng(substream(spec.seed, "psd_matrix"));

  Matrix G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.next_gaussian();

  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix U = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  // sign fix: make the R diagonal nonnegative so U is Haar-distributed
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0) U.col(j) = -U.col(j);

  Vector sigma(d);
  for (int i = 0; i < d; ++i) {
    if (i < spec.zero_count)
      sigma[i] = 0.0;
    else
      sigma[i] = spec.eig_lo + (spec.eig_hi - spec.eig_lo) * rng.next_unit();
  }

  Matrix A = U * sigma.asDiagonal() * U.transpose();
  return 0.5 * (A + A.transpose());
}

namespace {
// spectrum of A^T A via symmetric eigendecomposition
std::pair<double, double> gram_spectrum_bounds(const Matrix& A) {
  Matrix G = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + G.transpose()),
                                           Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double lo = std::max(0.0, ev.minCoeff());
  double hi = std::max(0.0, ev.maxCoeff());
  return {lo, hi};
}
}  // namespace

MinProblem::MinProblem(Matrix A, Vector b, Domain domain)
    : A_(std::move(A)), b_(std::move(b)), domain_(std::move(domain)) {
  if (A_.rows() != b_.size())
    throw InputError("MinProblem: A rows must match b size");
  if (domain_.dim() != static_cast<int>(A_.cols()))
    throw InputError("MinProblem: domain dim must match A cols");
  auto [lo, hi] = gram_spectrum_bounds(A_);
  smoothness_ = hi;
  modulus_ = (lo < 1e-10 * std::max(hi, 1.0)) ? 0.0 : lo;

  if (domain_.kind() == Domain::Kind::Free) {
    // minimum-norm least-squares solution; exact solution when A is invertible
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A_);
    Vector x = cod.solve(b_);
    minimizer_ = x;
    min_value_ = 0.5 * (A_ * x - b_).squaredNorm();
  }
}

double MinProblem::value(const Vector& x) const {
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Vector MinProblem::grad(const Vector& x) const {
  return A_.transpose() * (A_ * x - b_);
}

const Vector& MinProblem::minimizer() const {
  if (!minimizer_) throw UnsupportedMetricError("MinProblem: no minimizer attached");
  return *minimizer_;
}

double MinProblem::min_value() const {
  if (!minimizer_) throw UnsupportedMetricError("MinProblem: no minimizer attached");
  return min_value_;
}

MinimaxProblem MinimaxProblem::bilinear(Matrix A, double radius) {
  if (!(radius > 0)) throw InputError("bilinear: radius must be positive");
  MinimaxProblem p;
  p.kind_ = Kind::Bilinear;
  p.A_ = std::move(A);
  p.mu_ = 0;
  p.radius_ = radius;
  auto [lo, hi] = gram_spectrum_bounds(p.A_);
  (void)lo;
  p.smoothness_ = std::sqrt(hi);  // sigma_max(A)
  p.dom_x_ = Domain::ball(Vector::Zero(p.A_.rows()), radius);
  p.dom_y_ = Domain::ball(Vector::Zero(p.A_.cols()), radius);
  return p;
}

MinimaxProblem MinimaxProblem::scsc_quadratic(Matrix A, double mu, double radius) {
  if (!(mu > 0)) throw InputError("scsc_quadratic: mu must be positive");
  MinimaxProblem p = bilinear(std::move(A), radius);
  p.kind_ = Kind::ScscQuadratic;
  p.mu_ = mu;
  p.smoothness_ += mu;
  return p;
}

double MinimaxProblem::value(const Vector& x, const Vector& y) const {
  double v = x.dot(A_ * y);
  if (kind_ == Kind::ScscQuadratic)
    v += 0.5 * mu_ * x.squaredNorm() - 0.5 * mu_ * y.squaredNorm();
  return v;
}

Vector MinimaxProblem::grad_x(const Vector& x, const Vector& y) const {
  Vector g = A_ * y;
  if (kind_ == Kind::ScscQuadratic) g += mu_ * x;
  return g;
}

Vector MinimaxProblem::grad_y(const Vector& x, const Vector& y) const {
  Vector g = A_.transpose() * x;
  if (kind_ == Kind::ScscQuadratic) g -= mu_ * y;
  return g;
}

double MinimaxProblem::condition_number() const {
  if (mu_ <= 0)
    throw UnsupportedMetricError("condition_number: modulus is zero");
  return smoothness_ / mu_;
}

MinProblem make_quadratic_min(const InstanceSeedSpec& spec, double b_scale) {
  if (!(b_scale >= 0)) throw InputError("make_quadratic_min: b_scale must be >= 0");
  Matrix A = structured_psd(spec);
  Rng rng(substream(spec.seed, "rhs"));
  Vector b = b_scale * rng.gaussian_vector(spec.dim);
  return MinProblem(std::move(A), std::move(b), Domain::free(spec.dim));
}

MinimaxProblem make_bilinear_game(const InstanceSeedSpec& spec, double radius) {
  if (!(radius > 0)) throw InputError("make_bilinear_game: radius must be > 0");
  return MinimaxProblem::bilinear(structured_psd(spec), radius);
}

MinimaxProblem make_scsc_quadratic(const InstanceSeedSpec& spec, double mu,
                                   double radius) {
  if (!(mu > 0)) throw InputError("make_scsc_quadratic: mu must be > 0");
  if (!(radius > 0)) throw InputError("make_scsc_quadratic: radius must be > 0");
  return MinimaxProblem::scsc_quadratic(structured_psd(spec), mu, radius);
}

AnchoredScalar::AnchoredScalar(const ScalarObjective& base, double r, Vector anchor)
    : base_(&base), r_(r), anchor_(std::move(anchor)) {
  if (!(r > 0)) throw ConfigError("AnchoredScalar: r must be positive");
  if (anchor_.size() != base.domain().dim())
    throw InputError("AnchoredScalar: anchor dimension mismatch");
}

double AnchoredScalar::value(const Vector& x) const {
  return base_->value(x) + 0.5 * r_ * (x - anchor_).squaredNorm();
}

Vector AnchoredScalar::grad(const Vector& x) const {
  return base_->grad(x) + r_ * (x - anchor_);
}

AnchoredSaddle::AnchoredSaddle(const SaddleObjective& base, double r, Vector ax,
                               Vector ay)
    : base_(&base), r_(r), ax_(std::move(ax)), ay_(std::move(ay)) {
  if (!(r > 0)) throw ConfigError("AnchoredSaddle: r must be positive");
  if (ax_.size() != base.domain_x().dim() || ay_.size() != base.domain_y().dim())
    throw InputError("AnchoredSaddle: anchor dimension mismatch");
}

double AnchoredSaddle::value(const Vector& x, const Vector& y) const {
  return base_->value(x, y) + 0.5 * r_ * (x - ax_).squaredNorm() -
         0.5 * r_ * (y - ay_).squaredNorm();
}

Vector AnchoredSaddle::grad_x(const Vector& x, const Vector& y) const {
  return base_->grad_x(x, y) + r_ * (x - ax_);
}

Vector AnchoredSaddle::grad_y(const Vector& x, const Vector& y) const {
  return base_->grad_y(x, y) - r_ * (y - ay_);
}

nlohmann::json ProblemSpec::to_json() const {
  nlohmann::json j{{"kind", kind},
                   {"d", instance.dim},
                   {"seed", instance.seed},
                   {"eig_lo", instance.eig_lo},
                   {"eig_hi", instance.eig_hi},
                   {"zeros", instance.zero_count}};
  if (kind == "quadratic_min") j["b_scale"] = b_scale;
  if (kind == "scsc_quadratic") j["mu"] = mu;
  if (is_minimax()) j["D"] = radius;
  return j;
}

ProblemSpec ProblemSpec::from_json(const nlohmann::json& j) {
  ProblemSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (s.kind != "quadratic_min" && s.kind != "bilinear" &&
      s.kind != "scsc_quadratic")
    throw ConfigError("problem spec: unknown kind '" + s.kind + "'");
  s.instance.dim = j.at("d").get<int>();
  s.instance.seed = j.value("seed", std::uint64_t{0});
  s.instance.eig_lo = j.at("eig_lo").get<double>();
  s.instance.eig_hi = j.at("eig_hi").get<double>();
  s.instance.zero_count = j.value("zeros", 0);
  if (s.kind == "quadratic_min") s.b_scale = j.value("b_scale", 0.0);
  if (s.kind == "scsc_quadratic") s.mu = j.at("mu").get<double>();
  if (s.is_minimax()) s.radius = j.at("D").get<double>();
  return s;
}

MinProblem ProblemSpec::build_min() const {
  if (is_minimax()) throw ConfigError("problem spec: not a minimization kind");
  return make_quadratic_min(instance, b_scale);
}

MinimaxProblem ProblemSpec::build_minimax() const {
  if (!is_minimax()) throw ConfigError("problem spec: not a minimax kind");
  if (kind == "bilinear") return make_bilinear_game(instance, radius);
  return make_scsc_quadratic(instance, mu, radius);
}

}  // namespace reprosolve
