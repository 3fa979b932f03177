#pragma once

#include <limits>
#include <vector>

#include "reprosolve/domain.hpp"

namespace reprosolve {

struct JointPoint {
  Vector x, y;
  Vector stacked() const {
    Vector z(x.size() + y.size());
    z << x, y;
    return z;
  }
  static JointPoint split(const Vector& z, int x_dim) {
    return {z.head(x_dim), z.tail(z.size() - x_dim)};
  }
  double joint_norm() const { return std::sqrt(x.squaredNorm() + y.squaredNorm()); }
};

// Trajectory record. Minimax runs store stacked (x; y) vectors and set x_dim.
struct SolverRun {
  std::vector<long long> ticks;     // checkpointed iteration indices
  std::vector<Vector> iterates;     // iterate at each tick
  std::vector<Vector> averages;     // running average at each tick (averaged methods)
  Vector output;                    // final output point
  long long iterations = 0;
  long long oracle_calls = 0;
  int x_dim = 0;                    // 0 for minimization runs
  bool budget_exceeded = false;
  double certificate = std::numeric_limits<double>::quiet_NaN();

  bool is_minimax() const { return x_dim > 0; }
  JointPoint output_joint() const { return JointPoint::split(output, x_dim); }
};

// Every iteration up to 100, then geometric spacing with ratio 1.2
// (rounded, deduplicated), always ending at T. Includes t = 0.
std::vector<long long> checkpoint_schedule(long long T);

// Kahan-compensated running vector sum, for averages over up to 1e5 iterates.
class CompensatedSum {
 public:
  void add(const Vector& v) {
    if (sum_.size() == 0) {
      sum_ = Vector::Zero(v.size());
      carry_ = Vector::Zero(v.size());
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double y = v[i] - carry_[i];
      double t = sum_[i] + y;
      carry_[i] = (t - sum_[i]) - y;
      sum_[i] = t;
    }
    ++count_;
  }
  long long count() const { return count_; }
  Vector mean() const {
    return count_ > 0 ? Vector(sum_ / static_cast<double>(count_)) : sum_;
  }

 private:
  Vector sum_;
  Vector carry_;
  long long count_ = 0;
};

}  // namespace reprosolve
