#include "reprosolve/oracles.hpp"

#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

namespace reprosolve {

std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::Exact: return "exact";
    case OracleKind::InexactInit: return "inexact_init";
    case OracleKind::InexactGrad: return "inexact_grad";
    case OracleKind::StochasticGrad: return "stochastic_grad";
  }
  return "exact";
}

std::string to_string(GradMode m) {
  switch (m) {
    case GradMode::FixedDirection: return "fixed_direction";
    case GradMode::PaperLiteralOnes: return "paper_literal_ones";
    case GradMode::PointHash: return "point_hash";
  }
  return "fixed_direction";
}

OracleKind oracle_kind_from_string(const std::string& s) {
  if (s == "exact") return OracleKind::Exact;
  if (s == "inexact_init") return OracleKind::InexactInit;
  if (s == "inexact_grad") return OracleKind::InexactGrad;
  if (s == "stochastic_grad") return OracleKind::StochasticGrad;
  throw ConfigError("oracle spec: unknown kind '" + s + "'");
}

GradMode grad_mode_from_string(const std::string& s) {
  if (s == "fixed_direction") return GradMode::FixedDirection;
  if (s == "paper_literal_ones") return GradMode::PaperLiteralOnes;
  if (s == "point_hash") return GradMode::PointHash;
  throw ConfigError("oracle spec: unknown grad_mode '" + s + "'");
}

void OracleSpec::validate() const {
  if (!(delta >= 0)) throw ConfigError("oracle spec: delta must be >= 0");
}

nlohmann::json OracleSpec::to_json() const {
  return nlohmann::json{{"kind", to_string(kind)},
                        {"delta", delta},
                        {"grad_mode", to_string(grad_mode)},
                        {"seed", seed}};
}

OracleSpec OracleSpec::from_json(const nlohmann::json& j) {
  OracleSpec s;
  s.kind = oracle_kind_from_string(j.at("kind").get<std::string>());
  s.delta = j.value("delta", 0.0);
  if (j.contains("grad_mode"))
    s.grad_mode = grad_mode_from_string(j.at("grad_mode").get<std::string>());
  s.seed = j.value("seed", std::uint64_t{0});
  s.validate();
  return s;
}

InitDraw draw_init(const OracleSpec& spec, const Domain& domain, const Vector& u0) {
  spec.validate();
  if (spec.kind != OracleKind::InexactInit)
    throw ConfigError("draw_init: oracle kind must be inexact_init");
  if (!domain.contains(u0))
    throw InputError("draw_init: reference point is infeasible");
  InitDraw out;
  out.reference = u0;
  if (spec.delta == 0) {
    out.start = u0;
    out.offset_norm = 0;
    return out;
  }
  Rng rng(substream(spec.seed, "init_draw"));
  Vector v = rng.ball_point(static_cast<int>(u0.size()), spec.delta / 2.0);
  out.start = domain.project(u0 + v);
  out.offset_norm = (out.start - u0).norm();
  return out;
}

namespace {
std::uint64_t hash_point_bits(const Vector& x, std::uint64_t seed) {
  std::uint64_t h = detail::mix64(seed ^ 0x517cc1b727220a95ull);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&bits, &x[i], sizeof(bits));
    h = detail::mix64(h ^ bits);
  }
  return h;
}
}  // namespace

Perturbation::Perturbation(const OracleSpec& spec, int dim)
    : spec_(spec), dim_(dim), stream_(substream(spec.seed, "noise")) {
  spec_.validate();
  if (dim <= 0) throw InputError("perturbation: dimension must be positive");
  if (spec_.kind == OracleKind::InexactGrad &&
      spec_.grad_mode == GradMode::FixedDirection) {
    Rng dir_rng(substream(spec_.seed, "direction"));
    direction_ = dir_rng.unit_vector(dim_);
  }
}

Vector Perturbation::noise(const Vector& query) {
  switch (spec_.kind) {
    case OracleKind::Exact:
    case OracleKind::InexactInit:
      return Vector::Zero(dim_);
    case OracleKind::InexactGrad: {
      if (spec_.delta == 0) return Vector::Zero(dim_);
      switch (spec_.grad_mode) {
        case GradMode::FixedDirection:
          return spec_.delta * direction_;
        case GradMode::PaperLiteralOnes:
          return spec_.delta * Vector::Ones(dim_);
        case GradMode::PointHash: {
          Rng local(hash_point_bits(query, spec_.seed));
          return spec_.delta * local.unit_vector(dim_);
        }
      }
      return Vector::Zero(dim_);
    }
    case OracleKind::StochasticGrad: {
      // isotropic with total variance delta^2
      Vector g = stream_.gaussian_vector(dim_);
      return (spec_.delta / std::sqrt(static_cast<double>(dim_))) * g;
    }
  }
  return Vector::Zero(dim_);
}

Perturbation Perturbation::clone_with_subseed(std::uint64_t index) const {
  OracleSpec s = spec_;
  s.seed = substream(spec_.seed, "clone", index);
  return Perturbation(s, dim_);
}

InexactMinOracle::InexactMinOracle(const ScalarObjective& f, const OracleSpec& spec)
    : f_(&f), pert_(spec, f.domain().dim()) {}

Vector InexactMinOracle::grad(const Vector& x) {
  ++calls_;
  Vector g = f_->grad(x);
  if (pert_.spec().kind == OracleKind::Exact ||
      pert_.spec().kind == OracleKind::InexactInit)
    return g;
  return g + pert_.noise(x);
}

OracleKind InexactMinOracle::kind() const { return pert_.spec().kind; }

InexactJointOracle::InexactJointOracle(const SaddleObjective& f,
                                       const OracleSpec& spec)
    : f_(&f), pert_(spec, f.domain_x().dim() + f.domain_y().dim()) {}

std::pair<Vector, Vector> InexactJointOracle::grad(const Vector& x,
                                                   const Vector& y) {
  ++calls_;
  Vector gx = f_->grad_x(x, y);
  Vector gy = f_->grad_y(x, y);
  const auto& spec = pert_.spec();
  if (spec.kind == OracleKind::Exact || spec.kind == OracleKind::InexactInit)
    return {std::move(gx), std::move(gy)};
  Vector q(x.size() + y.size());
  q << x, y;
  Vector n = pert_.noise(q);
  gx += n.head(x.size());
  gy += n.tail(y.size());
  return {std::move(gx), std::move(gy)};
}

OracleKind InexactJointOracle::kind() const { return pert_.spec().kind; }

AnchoredMinOracle::AnchoredMinOracle(MinOracle& base, double r, Vector anchor)
    : base_(&base), r_(r), anchor_(std::move(anchor)) {
  if (!(r > 0)) throw ConfigError("AnchoredMinOracle: r must be positive");
}

Vector AnchoredMinOracle::grad(const Vector& x) {
  return base_->grad(x) + r_ * (x - anchor_);
}

long long AnchoredMinOracle::calls() const { return base_->calls(); }
OracleKind AnchoredMinOracle::kind() const { return base_->kind(); }

AnchoredJointOracle::AnchoredJointOracle(JointOracle& base, double r, Vector ax,
                                         Vector ay)
    : base_(&base), r_(r), ax_(std::move(ax)), ay_(std::move(ay)) {
  if (!(r > 0)) throw ConfigError("AnchoredJointOracle: r must be positive");
}

std::pair<Vector, Vector> AnchoredJointOracle::grad(const Vector& x,
                                                    const Vector& y) {
  auto [gx, gy] = base_->grad(x, y);
  gx += r_ * (x - ax_);
  gy -= r_ * (y - ay_);
  return {std::move(gx), std::move(gy)};
}

long long AnchoredJointOracle::calls() const { return base_->calls(); }
OracleKind AnchoredJointOracle::kind() const { return base_->kind(); }

double audit_inexactness(const OracleSpec& spec, const ScalarObjective& f,
                         const std::vector<Vector>& sample_points) {
  if (sample_points.empty()) throw InputError("audit_inexactness: empty sample");
  InexactMinOracle oracle(f, spec);
  if (spec.kind == OracleKind::StochasticGrad) {
    double acc = 0;
    for (const auto& x : sample_points)
      acc += (oracle.grad(x) - f.grad(x)).squaredNorm();
    return acc / static_cast<double>(sample_points.size());
  }
  double worst = 0;
  for (const auto& x : sample_points)
    worst = std::max(worst, (oracle.grad(x) - f.grad(x)).norm());
  return worst;
}

double audit_inexactness(const OracleSpec& spec, const SaddleObjective& f,
                         const std::vector<std::pair<Vector, Vector>>& samples) {
  if (samples.empty()) throw InputError("audit_inexactness: empty sample");
  InexactJointOracle oracle(f, spec);
  auto err = [&](const Vector& x, const Vector& y) {
    auto [gx, gy] = oracle.grad(x, y);
    Vector dx = gx - f.grad_x(x, y);
    Vector dy = gy - f.grad_y(x, y);
    return std::sqrt(dx.squaredNorm() + dy.squaredNorm());
  };
  if (spec.kind == OracleKind::StochasticGrad) {
    double acc = 0;
    for (const auto& [x, y] : samples) {
      double e = err(x, y);
      acc += e * e;
    }
    return acc / static_cast<double>(samples.size());
  }
  double worst = 0;
  for (const auto& [x, y] : samples) worst = std::max(worst, err(x, y));
  return worst;
}

}  // namespace reprosolve
