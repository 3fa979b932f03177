#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace reprosolve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}
}  // namespace detail

// Substream derivation rule: one independent stream per (seed, role, index).
//   substream(s, role, i) = mix64( mix64(s ^ fnv1a(role)) ^ mix64((i+1)*gamma) )
// All seeded randomness in the library flows through this single rule.
inline std::uint64_t substream(std::uint64_t seed, std::string_view role,
                               std::uint64_t index = 0) {
  using namespace detail;
  return mix64(mix64(seed ^ fnv1a(role)) ^ mix64((index + 1) * kGamma));
}

// Counter-based generator (SplitMix64): output i is a hash of seed + i*gamma,
// so streams with distinct seeds never couple through call order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += detail::kGamma;
    return detail::mix64(state_);
  }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]
  double next_unit_open() { return 1.0 - next_unit(); }

  // Box-Muller, one variate per pair of uniforms (no cached partner)
  double next_gaussian() {
    double u1 = next_unit_open();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  Vector gaussian_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = next_gaussian();
    return v;
  }

  Vector unit_vector(int dim) {
    Vector v = gaussian_vector(dim);
    double n = v.norm();
    if (n == 0.0) {
      v.setZero();
      v[0] = 1.0;
      return v;
    }
    return v / n;
  }

  // uniform in the closed Euclidean ball of the given radius
  Vector ball_point(int dim, double radius) {
    Vector dir = unit_vector(dim);
    double u = next_unit();
    return radius * std::pow(u, 1.0 / dim) * dir;
  }

 private:
  std::uint64_t state_;
};

}  // namespace reprosolve
