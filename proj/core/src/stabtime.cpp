#include "fts/stabtime.hpp"

#include "fts/errors.hpp"
#include "fts/spectral.hpp"

namespace fts {

namespace {

void extend_walks(const SignPattern& w, std::vector<int>& walk, int remaining,
                  std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(walk);
    return;
  }
  const auto last = static_cast<std::size_t>(walk.back());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!w(last, k)) continue;
    walk.push_back(static_cast<int>(k));
    extend_walks(w, walk, remaining - 1, out);
    walk.pop_back();
  }
}

} // namespace

PathSet path_set(const SignPattern& w) {
  const auto k0 = nilpotency_index(w);
  if (!k0) throw NotNilpotentError("not robust FTS: sign pattern W is not nilpotent");
  PathSet ps;
  ps.k0 = *k0;
  std::vector<int> walk;
  for (std::size_t start = 0; start < w.size(); ++start) {
    walk.assign(1, static_cast<int>(start));
    extend_walks(w, walk, ps.k0 - 1, ps.tuples);
  }
  return ps;
}

TimeReport time_report(const HyperbolicSystem& sys) {
  const SignPattern w = sign_pattern(sys.boundary());
  const PathSet ps = path_set(w);
  const ValidationReport val = validate_system(sys);

  TimeReport rep;
  rep.k0 = ps.k0;
  rep.a0 = val.a_floor;
  rep.upper_bound = static_cast<double>(ps.k0) / val.a_floor;
  if (!sys.speeds_time_independent()) return rep;

  const TravelTimes tt = compute_travel_times(sys);
  double best = -1.0;
  for (const auto& tuple : ps.tuples) {
    double sum = 0.0;
    for (int i : tuple) sum += tt.tau[static_cast<std::size_t>(i)];
    if (sum > best) {
      best = sum;
      rep.critical_walk = tuple;
    }
  }
  rep.t_star = best;
  rep.t_star_exact = ps.k0 <= 3;
  return rep;
}

} // namespace fts
