#include "reprosolve/metrics.hpp"

#include <cmath>
#include <functional>

namespace reprosolve {

double optimality_gap(const MinProblem& problem, const Vector& x) {
  if (!problem.has_minimizer())
    throw UnsupportedMetricError("optimality_gap: no reference optimum");
  return problem.value(x) - problem.min_value();
}

double duality_gap_bilinear(const MinimaxProblem& problem, const Vector& x,
                            const Vector& y) {
  if (problem.kind() != MinimaxProblem::Kind::Bilinear)
    throw UnsupportedMetricError("duality_gap_bilinear: not a bilinear game");
  const Domain& dx = problem.domain_x();
  const Domain& dy = problem.domain_y();
  if (dx.kind() != Domain::Kind::Ball || dy.kind() != Domain::Kind::Ball ||
      dx.center().norm() != 0 || dy.center().norm() != 0)
    throw UnsupportedMetricError(
        "duality_gap_bilinear: needs origin-centered ball domains");
  const Matrix& A = problem.matrix();
  return dy.radius() * (A.transpose() * x).norm() + dx.radius() * (A * y).norm();
}

namespace {

// Maximize a concave quadratic-or-linear slice over a bounded domain by
// gradient steps with an exact (3-point fitted) line search.
struct InnerResult {
  Vector point;
  double value;
  double residual;
  long long steps;
};

InnerResult ascend(const std::function<double(const Vector&)>& value,
                   const std::function<Vector(const Vector&)>& grad,
                   const Domain& dom, Vector start, long long budget) {
  Vector p = dom.project(start);
  auto residual_at = [&](const Vector& q) {
    Vector g = grad(q);
    double s = 0;
    for (const auto& b : dom.ball_blocks()) {
      Vector gb = g.segment(b.offset, b.dim);
      s += gb.dot(b.center - q.segment(b.offset, b.dim)) + b.radius * gb.norm();
    }
    return s;
  };
  double diam = dom.diameter();
  long long t = 0;
  for (; t < budget; ++t) {
    Vector g = grad(p);
    double gn = g.norm();
    if (gn == 0) break;
    // fit the (unprojected) slice phi(s) = value(p + s g); exact for quadratics
    double h = 0.25 * diam / gn;
    double f0 = value(p);
    double f1 = value(p + h * g);
    double f2 = value(p + 2 * h * g);
    double curv = (f2 - 2 * f1 + f0) / (h * h);
    double step = (curv < -1e-13 * std::max(1.0, std::abs(f0)))
                      ? gn * gn / (-curv)
                      : 2 * diam / gn;  // flat slice: stride past the boundary
    Vector q = dom.project(p + step * g);
    if (value(q) <= f0) {
      // shrink until improvement or give up
      bool improved = false;
      for (int k = 0; k < 40; ++k) {
        step *= 0.5;
        q = dom.project(p + step * g);
        if (value(q) > f0) {
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    p = q;
    if (residual_at(p) <= 1e-13 * std::max(1.0, std::abs(value(p)))) {
      ++t;
      break;
    }
  }
  return {p, value(p), residual_at(p), t};
}

}  // namespace

GapReport duality_gap_estimate(const SaddleObjective& problem, const Vector& x,
                               const Vector& y, long long inner_budget) {
  if (inner_budget <= 0)
    throw InputError("duality_gap_estimate: inner budget must be positive");
  if (!problem.domain_x().bounded() || !problem.domain_y().bounded())
    throw UnsupportedMetricError("duality_gap_estimate: needs bounded domains");

  auto up = ascend([&](const Vector& v) { return problem.value(x, v); },
                   [&](const Vector& v) { return problem.grad_y(x, v); },
                   problem.domain_y(), y, inner_budget);
  auto down = ascend([&](const Vector& u) { return -problem.value(u, y); },
                     [&](const Vector& u) { return Vector(-problem.grad_x(u, y)); },
                     problem.domain_x(), x, inner_budget);

  GapReport rep;
  rep.method = GapReport::Method::InnerSolver;
  rep.value = up.value + down.value;  // max_y F(x, y) - min_x F(x, y)
  rep.residual = up.residual + down.residual;
  rep.iterations = up.steps + down.steps;
  return rep;
}

double linear_gap(const Vector& g_tilde, const Vector& z, const Domain& domain) {
  if (!domain.bounded())
    throw UnsupportedMetricError("linear_gap: needs a bounded domain");
  if (g_tilde.size() != z.size() || static_cast<int>(z.size()) != domain.dim())
    throw InputError("linear_gap: dimension mismatch");
  double s = 0;
  for (const auto& b : domain.ball_blocks()) {
    Vector gb = g_tilde.segment(b.offset, b.dim);
    s += gb.dot(z.segment(b.offset, b.dim) - b.center) + b.radius * gb.norm();
  }
  return s;
}

double deviation_sq(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InputError("deviation_sq: shape mismatch");
  return (a - b).squaredNorm();
}

double deviation_sq(const JointPoint& a, const JointPoint& b) {
  if (a.x.size() != b.x.size() || a.y.size() != b.y.size())
    throw InputError("deviation_sq: shape mismatch");
  return (a.x - b.x).squaredNorm() + (a.y - b.y).squaredNorm();
}

double rate_slope(const std::vector<std::pair<double, double>>& series,
                  double t_lo, double t_hi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(t > 0)) throw InputError("rate_slope: nonpositive abscissa");
    if (!(v > 0)) throw InputError("rate_slope: nonpositive value");
    pts.emplace_back(std::log(t), std::log(v));
  }
  if (pts.size() < 3) throw InputError("rate_slope: needs at least 3 points");
  double mx = 0, my = 0;
  for (const auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  if (sxx == 0) throw InputError("rate_slope: degenerate abscissas");
  return sxy / sxx;
}

}  // namespace reprosolve
