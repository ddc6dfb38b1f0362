#include "fts_cli/cli.hpp"

#include "fts/graph_criteria.hpp"
#include "fts/report_json.hpp"
#include "fts/simulator.hpp"
#include "fts/spectral.hpp"
#include "fts/stabtime.hpp"
#include "fts_cli/config.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace fts::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  bool pretty = false;
  bool json_flag = false;
};

std::vector<double> split_numbers(const std::string& s, char sep, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(sep, pos);
    if (end == std::string::npos) end = s.size();
    const std::string part = s.substr(pos, end - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw ConfigError(std::string("bad ") + what + " '" + s + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

void emit(std::ostream& out, const json& j, const Common& c) {
  out << (c.pretty ? j.dump(2) : j.dump()) << '\n';
}

std::string walk_text(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " -> " : "") + std::to_string(v[i] + 1);
  return s;
}

int cmd_analyze(const Common& c, std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = load_config(c.config);
  const HyperbolicSystem sys = cfg.system();
  const CriteriaReport rep = robust_fts_report(sys.boundary(), cfg.minor_tolerance);
  emit(out, to_json(rep), c);
  if (rep.robust_fts) {
    err << "robust FTS: G_P is acyclic, k0 = " << *rep.k0 << '\n';
    return kAffirmative;
  }
  err << "not robust FTS: cycle " << walk_text(rep.cycle_witness) << '\n';
  return kNegative;
}

int cmd_spectrum(const Common& c, const std::string& window, std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = load_config(c.config);
  std::optional<Window> w;
  if (!window.empty()) {
    const auto v = split_numbers(window, ':', "window");
    if (v.size() != 4) throw ConfigError("window must be re0:re1:im0:im1");
    w = Window{v[0], v[1], v[2], v[3]};
  }
  const SpectrumReport rep = spectrum_report(cfg.system(), w);
  emit(out, to_json(rep), c);
  if (rep.empty) {
    err << "spectrum empty: Delta is identically 1, the problem is FTS\n";
    return kAffirmative;
  }
  err << "spectrum nonempty: " << rep.delta.terms().size() << " exponential terms, "
      << rep.roots.roots.size() << " roots in the window\n";
  return kNegative;
}

int cmd_time(const Common& c, std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = load_config(c.config);
  const TimeReport rep = time_report(cfg.system());
  emit(out, to_json(rep), c);
  err << "k0 = " << rep.k0 << ", upper bound k0/a0 = " << rep.upper_bound;
  if (rep.t_star) err << ", T* = " << *rep.t_star << (rep.t_star_exact ? " (optimal)" : " (bound)");
  err << '\n';
  return kAffirmative;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << header << '\n' << std::setprecision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
    f << '\n';
  }
}

int cmd_simulate(const Common& c, const std::string& mode_name, const std::string& times_spec,
                 const std::string& out_dir, const std::vector<double>& snapshots,
                 std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = load_config(c.config);
  if (!cfg.phi) throw ConfigError("config: simulate needs initial data 'phi'");
  const SolveMode mode = mode_name == "march" ? SolveMode::march : SolveMode::recursive;

  double t0 = 0.0;
  double t1 = cfg.horizon;
  int steps = 100;
  if (!times_spec.empty()) {
    const auto v = split_numbers(times_spec, ':', "times");
    if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2]) || !(v[1] > v[0]))
      throw ConfigError("times must be t0:t1:steps with t1 > t0 and steps >= 1");
    t0 = v[0];
    t1 = v[1];
    steps = static_cast<int>(v[2]);
  }
  std::vector<double> times;
  for (int i = 0; i <= steps; ++i) times.push_back(t0 + (t1 - t0) * i / steps);

  const Simulator sim(cfg.system(), cfg.simulation_options());
  const DecayCurve curve = sim.decay_curve(*cfg.phi, times, mode);

  // First sample from which every later sample is below the tolerance.
  std::optional<double> vanished;
  for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
    if (it->sup > cfg.vanish_tolerance) break;
    vanished = it->t;
  }

  json j = to_json(curve);
  j["mode"] = mode == SolveMode::march ? "march" : "recursive";
  j["dt"] = sim.dt();
  j["tolerance"] = cfg.vanish_tolerance;
  j["vanished_at"] = vanished ? json(*vanished) : json(nullptr);

  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::vector<std::vector<double>> rows;
    for (const auto& p : curve.points) rows.push_back({p.t, p.l2, p.sup});
    write_csv(dir / "decay.csv", "t,l2,sup", rows);
    std::ofstream(dir / "decay.json") << j.dump(2) << '\n';
    std::string header = "x";
    for (int k = 1; k <= cfg.n; ++k) header += ",u" + std::to_string(k);
    for (std::size_t i = 0; i < snapshots.size(); ++i)
      write_csv(dir / ("snapshot_" + std::to_string(i + 1) + ".csv"), header,
                sim.snapshot(*cfg.phi, snapshots[i], 201, mode));
  }
  emit(out, j, c);
  if (vanished) {
    err << "solution below " << cfg.vanish_tolerance << " from t = " << *vanished << '\n';
    return kAffirmative;
  }
  err << "solution did not vanish on the requested times\n";
  return kNegative;
}

int cmd_verify(const Common& c, double candidate, std::optional<double> tol, bool claim_exact,
               int probes, std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = load_config(c.config);
  const Simulator sim(cfg.system(), cfg.simulation_options());
  const auto family = probe_family(cfg.n, probes);
  const VanishingResult res =
      sim.verify_vanishing(family, candidate, tol.value_or(cfg.vanish_tolerance), claim_exact);
  emit(out, to_json(res), c);
  err << "verify T = " << candidate << ": " << to_string(res.verdict);
  if (res.measured_time) err << ", measured vanishing time " << *res.measured_time;
  if (res.exactness != Exactness::not_claimed) err << ", exactness " << to_string(res.exactness);
  err << '\n';
  switch (res.verdict) {
    case Verdict::pass: return kAffirmative;
    case Verdict::fail: return kNegative;
    case Verdict::inconclusive: return kError;
  }
  return kError;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-time stabilization of 1-D hyperbolic systems", "fts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fts 0.1.0");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", common.config, "System config (JSON)")->required();
    sub->add_flag("--pretty", common.pretty, "Indent JSON output");
    sub->add_flag("--json", common.json_flag, "Compact JSON output (default)");
  };

  auto* analyze = app.add_subcommand("analyze", "Graph criteria for robust FTS");
  add_common(analyze);

  std::string window;
  auto* spectrum = app.add_subcommand("spectrum", "Characteristic function and its zeros");
  add_common(spectrum);
  spectrum->add_option("--window", window, "Search window re0:re1:im0:im1");

  auto* time = app.add_subcommand("time", "Stabilization-time bounds");
  add_common(time);

  std::string mode = "recursive";
  std::string times;
  std::string out_dir;
  std::vector<double> snapshots;
  auto* simulate = app.add_subcommand("simulate", "Decay curve of the exact solution");
  add_common(simulate);
  simulate->add_option("--mode", mode, "recursive or march")
      ->check(CLI::IsMember({"recursive", "march"}));
  simulate->add_option("--times", times, "Time grid t0:t1:steps");
  simulate->add_option("--out", out_dir, "Directory for CSV/JSON artifacts");
  simulate->add_option("--snapshot", snapshots, "Times for (x, u) snapshots written to --out");

  double candidate = 0.0;
  std::optional<double> tol;
  bool exact = false;
  int probes = 32;
  auto* verify = app.add_subcommand("verify", "Check vanishing of probe solutions after T");
  add_common(verify);
  verify->add_option("--T", candidate, "Candidate stabilization time")->required();
  verify->add_option("--tol", tol, "Sup-norm tolerance (default: config tolerances.vanish)");
  verify->add_flag("--exact", exact, "Also require a probe alive just before T");
  verify->add_option("--probes", probes, "Bumps per component")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAffirmative : kError;
  }

  try {
    if (*analyze) return cmd_analyze(common, out, err);
    if (*spectrum) return cmd_spectrum(common, window, out, err);
    if (*time) return cmd_time(common, out, err);
    if (*simulate) return cmd_simulate(common, mode, times, out_dir, snapshots, out, err);
    if (*verify) return cmd_verify(common, candidate, tol, exact, probes, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

} // namespace fts::cli
