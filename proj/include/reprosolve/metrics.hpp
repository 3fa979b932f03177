#pragma once

#include <utility>
#include <vector>

#include "reprosolve/problems.hpp"
#include "reprosolve/solver_run.hpp"

namespace reprosolve {

struct GapReport {
  double value = 0;
  enum class Method { ClosedForm, InnerSolver } method = Method::ClosedForm;
  double residual = 0;  // inner-solver certificate; 0 for closed forms
  long long iterations = 0;
};

// F(x) - F(x*); needs the problem's attached minimizer.
double optimality_gap(const MinProblem& problem, const Vector& x);

// Exact duality gap of the bilinear game on origin-centered balls:
// D ||A^T x|| + D ||A y||.
double duality_gap_bilinear(const MinimaxProblem& problem, const Vector& x,
                            const Vector& y);

// General fallback: inner projected ascent/descent with the given budget.
GapReport duality_gap_estimate(const SaddleObjective& problem, const Vector& x,
                               const Vector& y, long long inner_budget);

// sup_{z' in domain} g~^T (z - z') over a product of balls, in closed form.
double linear_gap(const Vector& g_tilde, const Vector& z, const Domain& domain);

double deviation_sq(const Vector& a, const Vector& b);
double deviation_sq(const JointPoint& a, const JointPoint& b);

// Least-squares slope of log(value) against log(T), restricted to
// T in [t_lo, t_hi]. Needs >= 3 points with positive values.
double rate_slope(const std::vector<std::pair<double, double>>& series,
                  double t_lo = 0,
                  double t_hi = std::numeric_limits<double>::infinity());

}  // namespace reprosolve
