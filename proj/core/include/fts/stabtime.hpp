#pragma once

// Stabilization-time bounds for robustly stabilizable systems (W nilpotent
// with index k0):
//   T_opt <= k0 / a0,          a0 = inf |a_j| over the strip,
//   T_opt  = T* for k0 <= 3,   T_opt <= T* for k0 > 3 (t-independent speeds),
// where T* is the largest sum of travel times along a walk i_1 -> ... -> i_k0
// in G_P, and T* = max_j tau_j when k0 = 1.

#include "fts/graph_criteria.hpp"
#include "fts/model.hpp"

#include <optional>
#include <vector>

namespace fts {

struct PathSet {
  int k0 = 0;
  std::vector<std::vector<int>> tuples;  // 0-based walks with k0 vertices
};

// Throws NotNilpotentError when W is not nilpotent.
PathSet path_set(const SignPattern& w);

struct TimeReport {
  int k0 = 0;
  double a0 = 0.0;
  double upper_bound = 0.0;
  std::optional<double> t_star;
  bool t_star_exact = false;
  std::vector<int> critical_walk;  // a tuple attaining T*
};

// Throws NotNilpotentError ("not robust FTS") for non-nilpotent W and
// ModelError when the system fails validation. T* is omitted when speeds
// depend on t.
TimeReport time_report(const HyperbolicSystem& sys);

} // namespace fts
