#include "fts/report_json.hpp"

#include <cmath>

namespace fts {

using nlohmann::json;

namespace {

json one_based(const std::vector<int>& idx) {
  json out = json::array();
  for (int i : idx) out.push_back(i + 1);
  return out;
}

// JSON has no infinities or NaNs; those become null.
json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Exactness e) noexcept {
  switch (e) {
    case Exactness::not_claimed: return "not_claimed";
    case Exactness::confirmed: return "confirmed";
    case Exactness::unconfirmed: return "unconfirmed";
  }
  return "?";
}

json to_json(const CriteriaReport& r) {
  json j;
  j["n"] = r.n;
  j["acyclic"] = r.acyclic;
  j["k0"] = r.k0 ? json(*r.k0) : json(nullptr);
  j["minors_W_zero"] = r.minors_w_zero;
  j["minors_P_zero"] = r.minors_p_zero ? json(*r.minors_p_zero) : json(nullptr);
  j["product_zero"] = r.product_zero;
  j["robust_fts"] = r.robust_fts;
  json w = json::object();
  if (!r.cycle_witness.empty()) w["cycle"] = one_based(r.cycle_witness);
  if (!r.walk_witness.empty()) w["walk"] = one_based(r.walk_witness);
  if (!r.minor_witness.empty()) w["minor_W"] = one_based(r.minor_witness);
  if (!r.minor_p_witness.empty()) w["minor_P"] = one_based(r.minor_p_witness);
  j["witness"] = w;
  return j;
}

json to_json(const SpectrumReport& r) {
  json j;
  j["empty"] = r.empty;
  j["fts"] = r.fts;
  json terms = json::array();
  for (const auto& t : r.delta.terms()) terms.push_back({{"r", t.r}, {"E", t.coeff}});
  j["terms"] = terms;
  j["tau"] = r.travel.tau;
  j["beta"] = r.transformed.beta;
  if (r.window) {
    j["window"] = {{"re0", r.window->re0}, {"re1", r.window->re1},
                   {"im0", r.window->im0}, {"im1", r.window->im1}};
  }
  json roots = json::array();
  for (const auto& root : r.roots.roots)
    roots.push_back({{"re", root.value.real()}, {"im", root.value.imag()},
                     {"residual", root.residual}});
  j["roots"] = roots;
  if (!r.empty) {
    j["winding"] = r.roots.total_winding;
    j["failed_boxes"] = r.roots.failed_boxes;
  }
  return j;
}

json to_json(const TimeReport& r) {
  json j;
  j["k0"] = r.k0;
  j["a0"] = r.a0;
  j["upper_bound"] = finite(r.upper_bound);
  j["T_star"] = r.t_star ? finite(*r.t_star) : json(nullptr);
  j["T_star_exact"] = r.t_star_exact;
  if (!r.critical_walk.empty()) j["critical_walk"] = one_based(r.critical_walk);
  return j;
}

json to_json(const ValidationReport& r) {
  json j;
  j["valid"] = r.valid;
  j["a_floor"] = r.a_floor;
  j["a_sup"] = r.a_sup;
  j["b_sup"] = r.b_sup;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json to_json(const DecayCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back({{"t", p.t}, {"l2", p.l2}, {"sup", p.sup}});
  return {{"points", pts}};
}

json to_json(const VanishingResult& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["candidate"] = r.candidate;
  j["delta"] = r.delta;
  j["max_sup_after"] = r.max_sup_after;
  j["exactness"] = to_string(r.exactness);
  j["survivor"] = r.survivor ? json(*r.survivor + 1) : json(nullptr);
  j["measured_time"] = r.measured_time ? json(*r.measured_time) : json(nullptr);
  return j;
}

} // namespace fts
