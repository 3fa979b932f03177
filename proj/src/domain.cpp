#include "reprosolve/domain.hpp"

#include <cmath>

namespace reprosolve {

Domain Domain::free(int dim) {
  if (dim <= 0) throw InputError("domain: dimension must be positive");
  Domain d;
  d.kind_ = Kind::Free;
  d.dim_ = dim;
  return d;
}

Domain Domain::ball(Vector center, double radius) {
  if (!(radius > 0)) throw InputError("domain: ball radius must be positive");
  if (center.size() == 0) throw InputError("domain: empty ball center");
  Domain d;
  d.kind_ = Kind::Ball;
  d.dim_ = static_cast<int>(center.size());
  d.center_ = std::move(center);
  d.radius_ = radius;
  return d;
}

Domain Domain::product(std::vector<Domain> parts) {
  if (parts.empty()) throw InputError("domain: empty product");
  Domain d;
  d.kind_ = Kind::Product;
  d.dim_ = 0;
  for (const auto& p : parts) d.dim_ += p.dim();
  d.parts_ = std::move(parts);
  return d;
}

bool Domain::bounded() const {
  switch (kind_) {
    case Kind::Free:
      return false;
    case Kind::Ball:
      return true;
    case Kind::Product:
      for (const auto& p : parts_)
        if (!p.bounded()) return false;
      return true;
  }
  return false;
}

double Domain::diameter() const {
  switch (kind_) {
    case Kind::Free:
      return std::numeric_limits<double>::infinity();
    case Kind::Ball:
      return 2.0 * radius_;
    case Kind::Product: {
      double s = 0;
      for (const auto& p : parts_) {
        double d = p.diameter();
        if (std::isinf(d)) return d;
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return 0;
}

Vector Domain::project(const Vector& p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw InputError("project: point dimension does not match domain");
  switch (kind_) {
    case Kind::Free:
      return p;
    case Kind::Ball: {
      Vector w = p - center_;
      double n = w.norm();
      if (n <= radius_) return p;
      Vector q = center_ + (radius_ / n) * w;
      // rescaling can land a few ulps outside; shrink the offset (with a
      // growing factor, so rounding against a large center cannot stall)
      // until membership holds and a second projection is a bitwise no-op
      double shrink = 4e-16;
      while ((q - center_).norm() > radius_ && shrink < 1.0) {
        q = center_ + (1.0 - shrink) * (q - center_);
        shrink *= 2.0;
      }
      if ((q - center_).norm() > radius_) q = center_;
      return q;
    }
    case Kind::Product: {
      Vector out(dim_);
      int off = 0;
      for (const auto& part : parts_) {
        out.segment(off, part.dim()) = part.project(p.segment(off, part.dim()));
        off += part.dim();
      }
      return out;
    }
  }
  return p;
}

bool Domain::contains(const Vector& p, double tol) const {
  if (static_cast<int>(p.size()) != dim_) return false;
  switch (kind_) {
    case Kind::Free:
      return true;
    case Kind::Ball:
      return (p - center_).norm() <= radius_ + tol;
    case Kind::Product: {
      int off = 0;
      for (const auto& part : parts_) {
        if (!part.contains(p.segment(off, part.dim()), tol)) return false;
        off += part.dim();
      }
      return true;
    }
  }
  return false;
}

const Vector& Domain::center() const {
  if (kind_ != Kind::Ball) throw InputError("domain: center() needs a ball");
  return center_;
}

double Domain::radius() const {
  if (kind_ != Kind::Ball) throw InputError("domain: radius() needs a ball");
  return radius_;
}

const std::vector<Domain>& Domain::parts() const { return parts_; }

namespace {
void collect_blocks(const Domain& d, int offset, std::vector<Domain::Block>* out) {
  switch (d.kind()) {
    case Domain::Kind::Free:
      throw UnsupportedMetricError(
          "ball_blocks: free domain has no bounded block decomposition");
    case Domain::Kind::Ball:
      out->push_back({offset, d.dim(), d.center(), d.radius()});
      return;
    case Domain::Kind::Product: {
      int off = offset;
      for (const auto& p : d.parts()) {
        collect_blocks(p, off, out);
        off += p.dim();
      }
      return;
    }
  }
}
}  // namespace

std::vector<Domain::Block> Domain::ball_blocks() const {
  std::vector<Block> out;
  collect_blocks(*this, 0, &out);
  return out;
}

Domain joint_domain(const Domain& dx, const Domain& dy) {
  return Domain::product({dx, dy});
}

}  // namespace reprosolve
