#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "reprosolve/errors.hpp"
#include "reprosolve/rng.hpp"

namespace reprosolve {

// Feasible set: all of R^d, a Euclidean ball, or a product of domains.
class Domain {
 public:
  enum class Kind { Free, Ball, Product };

  static Domain free(int dim);
  static Domain ball(Vector center, double radius);
  static Domain product(std::vector<Domain> parts);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool bounded() const;

  // sup_{p,q feasible} ||p - q||; +inf for free domains
  double diameter() const;

  // Euclidean-nearest feasible point. Exactly idempotent:
  // project(project(p)) == project(p) bitwise.
  Vector project(const Vector& p) const;

  bool contains(const Vector& p, double tol = 1e-12) const;

  // ball-only accessors
  const Vector& center() const;
  double radius() const;
  const std::vector<Domain>& parts() const;

  struct Block {
    int offset;
    int dim;
    Vector center;
    double radius;
  };
  // Flattened ball blocks; throws UnsupportedMetricError if any part is free.
  std::vector<Block> ball_blocks() const;

 private:
  Domain() = default;
  Kind kind_ = Kind::Free;
  int dim_ = 0;
  Vector center_;
  double radius_ = 0;
  std::vector<Domain> parts_;
};

// product of the x- and y-domains, for stacked saddle iterates
Domain joint_domain(const Domain& dx, const Domain& dy);

}  // namespace reprosolve
