#pragma once

// Exact solutions by the method of characteristics.
//
// A component j is transported along dx/dt = a_j(x,t). Following the
// characteristic through (x,t) backwards in time it meets either the
// initial line (then u_j = c * phi_j(foot)) or its inflow boundary at time
// w (then u_j = c * sum_k p_jk(w) u_k(outflow_k, w)); c is the damping
// factor exp(int_x^foot b_j/a_j). Two evaluation modes share the tracer:
//
//  * recursive: follows the reflections back to the initial line;
//  * march:     fills the inflow boundary values on a uniform time grid
//               (a delay system) and reconstructs the interior from it.

#include "fts/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fts {

enum class FootKind { left_boundary, right_boundary, initial_line };

struct CharFoot {
  FootKind kind = FootKind::initial_line;
  double x = 0.0;        // foot abscissa
  double t = 0.0;        // foot time (crossing ordinate); 0 on the initial line
  double damping = 1.0;  // exp of the integral of b/a from x to the foot
};

enum class SolveMode { recursive, march };

struct SimulationOptions {
  std::optional<double> dt;     // default: (shortest crossing time) / 64
  int rk_divisor = 64;          // RK4 step h = min(1, dt * a_floor) / rk_divisor
  int spatial_points = 513;     // Simpson nodes for norms
  long long max_rk_steps = 100'000'000;
};

// Inflow boundary values g_j(t_i) = u_j(inflow_j, t_i), t_i = i * dt. The
// entry at i = 0 is the limit from t > 0, i.e. P(0) applied to phi at the
// outflow points.
class BoundaryTrace {
public:
  BoundaryTrace() = default;
  BoundaryTrace(double dt, std::vector<std::vector<double>> values)
      : dt_(dt), values_(std::move(values)) {}

  double dt() const noexcept { return dt_; }
  std::size_t components() const noexcept { return values_.size(); }
  std::size_t steps() const noexcept { return values_.empty() ? 0 : values_.front().size(); }
  double end_time() const noexcept { return dt_ * static_cast<double>(steps() - 1); }
  const std::vector<double>& component(int j) const { return values_[static_cast<std::size_t>(j)]; }

  // Four-point Lagrange interpolation; linear near t = 0.
  double at(int j, double t) const { return interpolate(component(j), dt_, t, steps()); }

  // Interpolates using only the first `available` samples.
  static double interpolate(const std::vector<double>& v, double dt, double t, std::size_t available);

private:
  double dt_ = 0.0;
  std::vector<std::vector<double>> values_;
};

struct DecayPoint {
  double t = 0.0;
  double l2 = 0.0;
  double sup = 0.0;
};

struct DecayCurve {
  std::vector<DecayPoint> points;
};

enum class Verdict { pass, fail, inconclusive };
enum class Exactness { not_claimed, confirmed, unconfirmed };

struct VanishingResult {
  Verdict verdict = Verdict::fail;
  double candidate = 0.0;
  double delta = 0.0;              // checks happen at candidate +/- delta
  double max_sup_after = 0.0;      // worst probe at candidate + delta
  Exactness exactness = Exactness::not_claimed;
  std::optional<std::size_t> survivor;   // probe alive at candidate - delta
  std::optional<double> measured_time;   // max over probes of the vanishing time
};

// A function on the strip, u(j, x, t).
using StripFunction = std::function<double(int, double, double)>;

class Simulator {
public:
  // Validates the system (throws ModelError) and fixes dt and the RK step.
  explicit Simulator(HyperbolicSystem sys, SimulationOptions opts = {});

  const HyperbolicSystem& system() const noexcept { return sys_; }
  const ValidationReport& validation() const noexcept { return validation_; }
  double dt() const noexcept { return dt_; }
  double rk_step() const noexcept { return rk_step_; }
  double min_crossing_time() const noexcept { return min_crossing_; }
  int spatial_points() const noexcept { return opts_.spatial_points; }

  // Backward characteristic from (x,t) to its foot.
  CharFoot trace(int j, double x, double t) const;

  double evaluate_component(const InitialData& phi, int j, double x, double t) const;
  std::vector<double> evaluate(const InitialData& phi, double x, double t) const;

  BoundaryTrace march(const InitialData& phi, double until) const;
  // Interior value from a marched trace: one characteristic per component.
  std::vector<double> reconstruct(const InitialData& phi, const BoundaryTrace& trace, double x,
                                  double t) const;

  DecayCurve decay_curve(const InitialData& phi, std::span<const double> times,
                         SolveMode mode = SolveMode::recursive) const;

  // Rows (x, u_1, ..., u_n) on `points` uniform nodes of [0,1].
  std::vector<std::vector<double>> snapshot(const InitialData& phi, double t, int points,
                                            SolveMode mode = SolveMode::recursive) const;

  VanishingResult verify_vanishing(std::span<const InitialData> family, double candidate,
                                   double tol, bool claim_exact) const;

  // [(SR)^l u]_j(x,t): l reflections composed with transport along characteristics.
  double reflection_iterate(int l, const StripFunction& u, int j, double x, double t) const;

  // Norms of u(., t) with the offset Simpson grid.
  DecayPoint norms(const InitialData& phi, double t, SolveMode mode = SolveMode::recursive) const;

private:
  struct ComponentInfo {
    std::optional<double> speed;    // constant speed fast path
    std::optional<double> damping;  // constant damping
  };

  CharFoot trace_constant(int j, double x, double t, double a) const;
  CharFoot trace_rk4(int j, double x, double t) const;
  double damping_along_line(int j, double x, double x_foot, double t, double a) const;
  double evaluate_recursive(const InitialData& phi, int j, double x, double t, int depth,
                            int cap) const;
  DecayPoint norms_from(const std::function<std::vector<double>(double)>& u) const;

  HyperbolicSystem sys_;
  SimulationOptions opts_;
  ValidationReport validation_;
  std::vector<ComponentInfo> info_;
  double dt_ = 0.0;
  double rk_step_ = 0.0;
  double min_crossing_ = 0.0;
};

// Per component, `per_component` cubic hat bumps of half-width 1/per_component
// centred at (i + 1/2)/per_component; the other components are zero.
std::vector<InitialData> probe_family(int n, int per_component = 32);

} // namespace fts
