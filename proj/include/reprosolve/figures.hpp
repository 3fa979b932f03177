#pragma once

#include <string>
#include <vector>

#include "reprosolve/harness.hpp"

namespace reprosolve {

struct NamedFile {
  std::string relative_path;
  std::string bytes;
};

inline constexpr std::uint64_t kDefaultFigureSeed = 1729;

// Preset replication suites. "min_inexact_grad" runs gd/agd/reg_gd/reg_agd on
// the d=100 quadratic; "minimax_inexact_grad" runs eg/reg_eg/gda/reg_gda on
// the d=500 bilinear game. Emits one gap and one deviation CSV per algorithm
// plus one SVG per panel.
std::vector<NamedFile> make_figure(const std::string& figure_id,
                                   std::uint64_t seed);

}  // namespace reprosolve
