#include "reprosolve/solver_run.hpp"

#include <cmath>

namespace reprosolve {

std::vector<long long> checkpoint_schedule(long long T) {
  std::vector<long long> ticks;
  if (T < 0) T = 0;
  for (long long t = 0; t <= std::min<long long>(T, 100); ++t) ticks.push_back(t);
  double next = 100.0;
  while (ticks.back() < T) {
    next *= 1.2;
    long long t = std::min<long long>(T, std::llround(next));
    if (t > ticks.back()) ticks.push_back(t);
  }
  return ticks;
}

}  // namespace reprosolve
