#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "merobif/continuation.hpp"
#include "merobif/cycle.hpp"
#include "merobif/errors.hpp"
#include "merobif/family.hpp"
#include "merobif/locator.hpp"
#include "merobif/orbit.hpp"
#include "merobif/render.hpp"
#include "merobif/report_json.hpp"

namespace merobif {

enum class Comparator { less, greater, at_least, at_most, equal };

inline std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::less: return "<";
    case Comparator::greater: return ">";
    case Comparator::at_least: return ">=";
    case Comparator::at_most: return "<=";
    case Comparator::equal: return "==";
  }
  return "?";
}

struct Measurement {
  std::string name;
  double value = 0.0;
  Comparator op = Comparator::less;
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  bool pass = false;
  double runtime_s = 0.0;
  std::vector<Measurement> measurements;
  std::vector<std::string> artifacts;
  nlohmann::json details = nlohmann::json::object();

  const Measurement* find(std::string_view key) const {
    for (const auto& m : measurements)
      if (m.name == key) return &m;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : measurements)
      ms.push_back({{"name", m.name},
                    {"value", m.value},
                    {"comparator", std::string(to_string(m.op))},
                    {"threshold", m.threshold},
                    {"pass", m.pass}});
    return {{"name", name},          {"pass", pass},           {"runtime_s", runtime_s},
            {"measurements", ms},    {"artifacts", artifacts}, {"details", details}};
  }
};

struct ExperimentOptions {
  /// Artifacts (PPM, JSON) go here; nothing is written when empty.
  std::string out_dir;
  /// Render workers; 0 means default_worker_count().
  int workers = 0;
  /// Threshold overrides keyed by measurement name.
  std::map<std::string, double> thresholds;
};

inline constexpr std::array<std::string_view, 6> kExperimentNames = {
    "thmB_tangent", "thmA_limit_vc", "thmD_parabolic", "el92_no_exit", "shooting_density", "figure1"};

namespace detail {

class ReportBuilder {
 public:
  ReportBuilder(std::string name, const ExperimentOptions& opts)
      : opts_(opts), start_(std::chrono::steady_clock::now()) {
    report_.name = std::move(name);
  }

  void check(const std::string& key, double value, Comparator op, double threshold) {
    if (auto it = opts_.thresholds.find(key); it != opts_.thresholds.end()) threshold = it->second;
    bool ok = false;
    switch (op) {
      case Comparator::less: ok = value < threshold; break;
      case Comparator::greater: ok = value > threshold; break;
      case Comparator::at_least: ok = value >= threshold; break;
      case Comparator::at_most: ok = value <= threshold; break;
      case Comparator::equal: ok = value == threshold; break;
    }
    report_.measurements.push_back({key, value, op, threshold, ok});
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  nlohmann::json& details() { return report_.details; }
  std::vector<std::string>& artifacts() { return report_.artifacts; }

  ExperimentReport finish() {
    report_.runtime_s = elapsed();
    report_.pass = !report_.measurements.empty() &&
                   std::all_of(report_.measurements.begin(), report_.measurements.end(),
                               [](const Measurement& m) { return m.pass; });
    return std::move(report_);
  }

 private:
  const ExperimentOptions& opts_;
  std::chrono::steady_clock::time_point start_;
  ExperimentReport report_;
};

inline Complex tangent_base() { return {0.0, kPi / 2}; }

inline bool distinct_from(const std::vector<Complex>& found, Complex z, double tol) {
  return std::all_of(found.begin(), found.end(), [&](Complex w) { return std::abs(w - z) > tol; });
}

}  // namespace detail

/// The attracting period-2 branch of the tangent family that exits as
/// lambda -> i pi/2 along a ray.
struct TangentExitBranch {
  Complex lambda0;
  Complex direction;
  double start_radius = 0.2;
  std::vector<double> scan_abs_mu;  // per scanned direction; NaN when no period-2 attractor
  CycleBranchTrace trace;
};

/// Scans 64 directions at radius 0.2 for a period-2 attracting cycle of the
/// orbit of lambda*i, picks the one with smallest |mu| and follows it along
/// lambda0 + 10^t d with t stepping by 0.05 down to log10(s_end).
inline TangentExitBranch tangent_exit_branch(double s_end = 1e-10) {
  const FamilySpec fam = get_family("tangent");
  TangentExitBranch b;
  b.lambda0 = detail::tangent_base();
  std::optional<Cycle> best;
  for (int k = 0; k < 64; ++k) {
    const Complex d = std::polar(1.0, 2.0 * kPi * k / 64);
    const Complex lambda = b.lambda0 + b.start_radius * d;
    double mu = std::numeric_limits<double>::quiet_NaN();
    const OrbitFate fate = classify_singular_orbit(fam, lambda, 0);
    if (const auto* a = std::get_if<AttractedToCycle>(&fate); a && a->period == 2) {
      try {
        Cycle c = refine_cycle(fam, lambda, 2, a->representative);
        mu = std::abs(c.multiplier);
        if (c.period == 2 && (!best || mu < std::abs(best->multiplier))) {
          best = std::move(c);
          b.direction = d;
        }
      } catch (const NumericalError&) {
      }
    }
    b.scan_abs_mu.push_back(mu);
  }
  if (!best) throw ConvergenceError("tangent_exit_branch: no direction carries a period-2 attracting cycle");
  const Complex lambda0 = b.lambda0;
  const Complex d = b.direction;
  const ParameterPath path = [lambda0, d](double t) { return lambda0 + std::pow(10.0, t) * d; };
  std::vector<double> grid;
  const double t0 = std::log10(b.start_radius);
  const double t1 = std::log10(s_end);
  const int steps = static_cast<int>(std::ceil((t0 - t1) / 0.05));
  for (int k = 0; k <= steps; ++k) grid.push_back(std::max(t1, t0 - 0.05 * k));
  b.trace = continue_cycle_along_path(fam, path, grid, *best);
  return b;
}

namespace detail {

inline void branch_measurements(ReportBuilder& rb, const TangentExitBranch& b) {
  const auto& tr = b.trace;
  const Cycle& last = tr.cycles.back();
  const double log_mu_last = last.log_abs_multiplier;
  rb.check("status_exited", tr.status == BranchStatus::exited ? 1.0 : 0.0, Comparator::equal, 1.0);
  rb.check("final_max_abs_z", last.max_abs(), Comparator::greater, 1e8);
  rb.check("final_abs_mu", std::exp(log_mu_last), Comparator::less, 0.05);
  // Trend of log|mu| over the last decade of s.
  const double t_last = tr.t.back();
  std::size_t first = tr.t.size() - 1;
  while (first > 0 && tr.t[first - 1] <= t_last + 1.0) --first;
  std::size_t downs = 0;
  const std::size_t incs = tr.t.size() - 1 - first;
  for (std::size_t k = first + 1; k < tr.t.size(); ++k)
    if (tr.cycles[k].log_abs_multiplier < tr.cycles[k - 1].log_abs_multiplier) ++downs;
  const double frac = incs ? static_cast<double>(downs) / static_cast<double>(incs) : 0.0;
  rb.check("last_decade_decreasing_fraction", frac, Comparator::at_least, 0.75);
  rb.check("last_decade_log_mu_change", log_mu_last - tr.cycles[first].log_abs_multiplier, Comparator::less, 0.0);
  auto& d = rb.details();
  d["lambda0"] = to_json(b.lambda0);
  d["direction"] = to_json(b.direction);
  d["status"] = std::string(to_string(tr.status));
  d["steps"] = tr.t.size();
  d["s_final"] = std::pow(10.0, t_last);
  d["lambda_final"] = to_json(tr.path.back());
  d["log10_abs_mu_final"] = log_mu_last / std::log(10.0);
  d["final_cycle"] = to_json(last);
}

}  // namespace detail

inline ExperimentReport exp_thmB_tangent(const ExperimentOptions& opts = {}) {
  detail::ReportBuilder rb("thmB_tangent", opts);
  const TangentExitBranch b = tangent_exit_branch();
  detail::branch_measurements(rb, b);
  int found = 0;
  for (double m : b.scan_abs_mu) found += std::isnan(m) ? 0 : 1;
  rb.details()["period2_directions"] = found;
  rb.check("runtime_s", rb.elapsed(), Comparator::less, 30.0);
  return rb.finish();
}

inline ExperimentReport exp_thmA_limit_vc(const ExperimentOptions& opts = {}) {
  detail::ReportBuilder rb("thmA_limit_vc", opts);
  const FamilySpec fam = get_family("tangent");
  const TangentExitBranch b = tangent_exit_branch();
  const Complex lambda0 = b.lambda0;
  const Complex pole = -kPi / 2;
  auto& d = rb.details();
  d["status"] = std::string(to_string(b.trace.status));
  bool consistent = false;
  bool flagged = false;
  double finite_dist = std::numeric_limits<double>::infinity();
  std::size_t infinities = 0;
  try {
    const ExitReport ex = detect_exit(b.trace);
    const VirtualCycle vc = limit_virtual_cycle(ex, fam, lambda0);
    consistent = vc.all_consistent();
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t m = 0; m < vc.entries().size(); ++m) {
      const SpherePoint& e = vc.entries()[m];
      entries.push_back({{"point", to_json(e)},
                         {"consistent", vc.checks[m].consistent},
                         {"note", vc.checks[m].note},
                         {"singular_matches", vc.checks[m].singular_matches}});
      if (e.is_infinite()) {
        ++infinities;
        continue;
      }
      finite_dist = std::min(finite_dist, std::abs(e.value() - pole));
      for (std::size_t s : vc.checks[m].singular_matches)
        if (fam.singular_values[s].kind == SingularKind::asymptotic) flagged = true;
    }
    d["virtual_cycle"] = entries;
    d["minimal_length"] = vc.minimal_length_ok();
  } catch (const Error& e) {
    d["virtual_cycle_error"] = e.what();
  }
  rb.check("virtual_cycle_consistent", consistent ? 1.0 : 0.0, Comparator::equal, 1.0);
  rb.check("infinite_entries", static_cast<double>(infinities), Comparator::equal, 1.0);
  rb.check("finite_entry_dist_to_minus_pi_over_2", finite_dist, Comparator::less, 1e-3);
  rb.check("asymptotic_value_on_cycle", flagged ? 1.0 : 0.0, Comparator::equal, 1.0);

  const ActivityVerdict verdict = activity_probe(fam, lambda0, 0, 0.1, 16);
  const auto* active = std::get_if<ActiveConfident>(&verdict);
  d["activity"] = active ? active->description
                         : (std::holds_alternative<PassiveConfident>(verdict)
                                ? std::string("passive")
                                : "unknown: " + std::get<UnknownActivity>(verdict).reason);
  rb.check("activity_active_confident", active ? 1.0 : 0.0, Comparator::equal, 1.0);
  return rb.finish();
}

/// Parameters near i pi/2 where the period-2 multiplier of the exiting
/// cycle is approximately 1, from the model mu(e) ~ (pi/e)^2 exp(-i pi/e).
inline std::vector<Complex> parabolic_model_offsets(double max_abs = 0.3) {
  std::vector<Complex> out;
  const Complex I{0.0, 1.0};
  for (int k = -12; k <= 12; ++k) {
    for (double a : {-20.0, -8.0, -3.0, 3.0, 8.0, 20.0}) {
      for (double bb : {-5.0, -1.0, 1.0, 5.0}) {
        Complex u{a, bb};
        Complex g;
        for (int it = 0; it < 60; ++it) {
          g = 2.0 * std::log(kPi * u) - I * kPi * u - 2.0 * kPi * I * static_cast<double>(k);
          u -= g / (2.0 / u - I * kPi);
        }
        if (!(std::abs(g) < 1e-12)) continue;
        const Complex e = 1.0 / u;
        if (std::abs(e) < max_abs && detail::distinct_from(out, e, 1e-6)) out.push_back(e);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  return out;
}

inline ExperimentReport exp_thmD_parabolic(const ExperimentOptions& opts = {}) {
  detail::ReportBuilder rb("thmD_parabolic", opts);
  const FamilySpec fam = get_family("tangent");
  const Complex lambda0 = detail::tangent_base();
  std::vector<ParamSolveReport> found;
  std::vector<Complex> lambdas;
  nlohmann::json failures = nlohmann::json::array();
  for (const Complex& e : parabolic_model_offsets()) {
    if (found.size() >= 3) break;
    const Complex seed = lambda0 + e;
    try {
      ParamSolveReport r = solve_parabolic_report(fam, 2, 1.0, seed, seed * Complex{0.0, 1.0});
      if (std::abs(r.lambda - lambda0) < 1e-6 || !detail::distinct_from(lambdas, r.lambda, 1e-6)) continue;
      lambdas.push_back(r.lambda);
      found.push_back(std::move(r));
    } catch (const Error& ex) {
      failures.push_back({{"seed", to_json(seed)}, {"error", ex.what()}});
    }
  }
  double nearest = std::numeric_limits<double>::infinity();
  double farthest = 0.0;
  double worst_residual = 0.0;
  int non_persistent = 0;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : found) {
    const double dist = std::abs(r.lambda - lambda0);
    nearest = std::min(nearest, dist);
    farthest = std::max(farthest, dist);
    worst_residual = std::max(worst_residual, r.residual);
    for (const auto& [k, v] : r.verification)
      if (k == "non-persistent" && v) ++non_persistent;
    list.push_back(to_json(r));
  }
  rb.details()["parameters"] = list;
  rb.details()["seed_failures"] = failures;
  rb.check("parabolic_parameters_found", static_cast<double>(found.size()), Comparator::at_least, 2.0);
  rb.check("max_dist_to_lambda0", found.empty() ? std::numeric_limits<double>::infinity() : farthest,
           Comparator::less, 0.3);
  rb.check("min_dist_to_lambda0", nearest, Comparator::less, 0.1);
  rb.check("non_persistent_count", static_cast<double>(non_persistent), Comparator::equal,
           static_cast<double>(found.size()));
  rb.check("max_residual", found.empty() ? std::numeric_limits<double>::infinity() : worst_residual,
           Comparator::less, 1e-10);
  return rb.finish();
}

namespace detail {

inline double segment_point_distance(Complex a, Complex b, Complex p) { return segment_distance(a, b, p); }

// Random segment in the disk |lambda - center| <= radius staying clear of the
// listed points.
inline std::pair<Complex, Complex> random_segment(std::mt19937_64& rng, Complex center, double radius,
                                                  std::span<const Complex> avoid, double clearance) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&] {
    for (;;) {
      const Complex z{u(rng), u(rng)};
      if (std::abs(z) <= 1.0) return center + radius * z;
    }
  };
  for (;;) {
    const Complex a = draw();
    const Complex b = draw();
    bool ok = std::abs(b - a) > 0.1;
    for (const Complex& p : avoid) ok = ok && segment_point_distance(a, b, p) > clearance;
    if (ok) return {a, b};
  }
}

}  // namespace detail

/// Counts exits over 100 exponential and 100 quadratic straight-line
/// continuations of repelling or alternating fixed-point branches.
inline ExperimentReport exp_el92_no_exit(const ExperimentOptions& opts = {}) {
  detail::ReportBuilder rb("el92_no_exit", opts);
  std::mt19937_64 rng(19920101);
  std::map<std::string, int> status_counts;
  int exits = 0;
  int paths = 0;
  int setup_failures = 0;
  std::vector<double> grid(65);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(k) / 64.0;

  auto run = [&](const FamilySpec& fam, Complex a, Complex b, Complex z_seed) {
    const ParameterPath path = [a, b](double t) { return a + t * (b - a); };
    try {
      const Cycle c0 = refine_cycle(fam, a, 1, z_seed);
      const CycleBranchTrace tr = continue_cycle_along_path(fam, path, grid, c0);
      ++status_counts[fam.name + ":" + std::string(to_string(tr.status))];
      if (tr.status == BranchStatus::exited) ++exits;
      ++paths;
    } catch (const Error&) {
      ++setup_failures;
    }
  };

  const FamilySpec expf = get_family("exponential");
  const std::array<Complex, 2> exp_avoid{Complex{}, Complex{1.0 / std::exp(1.0), 0.0}};
  for (int k = 0; k < 100; ++k) {
    const auto [a, b] = detail::random_segment(rng, {0.0, 0.0}, 3.0, exp_avoid, 0.1);
    // Fixed point on the first non-principal branch: z ~ -(L - log L), L = log(-lambda) + 2 pi i.
    const Complex L = std::log(-a) + Complex{0.0, 2.0 * kPi};
    run(expf, a, b, -(L - std::log(L)));
  }
  const FamilySpec quad = get_family("quadratic");
  const std::array<Complex, 2> quad_avoid{Complex{0.25, 0.0}, Complex{}};
  for (int k = 0; k < 100; ++k) {
    const auto [a, b] = detail::random_segment(rng, {0.0, 0.0}, 2.0, quad_avoid, 0.05);
    const Complex root = std::sqrt(1.0 - 4.0 * a);
    run(quad, a, b, (k % 2 == 0 ? 1.0 + root : 1.0 - root) / 2.0);
  }
  rb.details()["status_counts"] = status_counts;
  rb.details()["seed"] = 19920101;
  rb.check("paths_run", static_cast<double>(paths), Comparator::equal, 200.0);
  rb.check("setup_failures", static_cast<double>(setup_failures), Comparator::equal, 0.0);
  rb.check("exits", static_cast<double>(exits), Comparator::equal, 0.0);
  rb.check("runtime_s", rb.elapsed(), Comparator::less, 60.0);
  return rb.finish();
}

/// Truncated parameters of orders 2 and 3 for the tangent family near i pi/2.
/// Order 2 comes from the direct relation f(v) = pole, order 3 from shooting
/// f^2(v) onto the pole -pi/2.
inline std::vector<ParamSolveReport> tangent_truncated_near_base() {
  const FamilySpec fam = get_family("tangent");
  const Complex lambda0 = detail::tangent_base();
  std::vector<ParamSolveReport> out;
  for (int j = 0; j < 16 && out.empty(); ++j) {
    const Complex seed = lambda0 + std::polar(0.05, 2.0 * kPi * j / 16);
    const Complex w = detail::sv_iterate(fam, 0, seed, 1);
    if (!std::isfinite(std::abs(w))) continue;
    try {
      NewtonOptions no;
      no.max_step = 0.1;
      ParamSolveReport r = solve_truncated(fam, 0, 2, *fam.nearest_pole_index(seed, w), seed, no);
      if (std::abs(r.lambda - lambda0) < 0.5 && std::abs(r.lambda - lambda0) > 1e-6) out.push_back(std::move(r));
    } catch (const Error&) {
    }
  }
  try {
    const Complex p = -kPi / 2;
    out.push_back(shoot(fam, 0, 1, [p](Complex) { return p; }, lambda0));
  } catch (const Error&) {
  }
  return out;
}

inline ExperimentReport exp_shooting_density(const ExperimentOptions& opts = {}) {
  detail::ReportBuilder rb("shooting_density", opts);
  const FamilySpec fam = get_family("tangent");
  const Complex lambda0 = detail::tangent_base();
  const auto reports = tangent_truncated_near_base();
  bool order2 = false;
  bool order3 = false;
  double worst = 0.0;
  double far = 0.0;
  double sep = std::numeric_limits<double>::infinity();
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const int truncation_order = r.kind == SolveKind::shooting ? r.order + 2 : r.order;
    order2 = order2 || truncation_order == 2;
    order3 = order3 || truncation_order == 3;
    worst = std::max(worst, revalidate(fam, r));
    far = std::max(far, std::abs(r.lambda - lambda0));
    sep = std::min(sep, std::abs(r.lambda - lambda0));
    for (std::size_t j = 0; j < i; ++j) sep = std::min(sep, std::abs(r.lambda - reports[j].lambda));
    auto jr = to_json(r);
    jr["truncation_order"] = truncation_order;
    list.push_back(jr);
  }
  rb.details()["parameters"] = list;
  rb.check("order2_found", order2 ? 1.0 : 0.0, Comparator::equal, 1.0);
  rb.check("order3_found", order3 ? 1.0 : 0.0, Comparator::equal, 1.0);
  rb.check("max_residual", reports.empty() ? std::numeric_limits<double>::infinity() : worst, Comparator::less,
           1e-9);
  rb.check("max_dist_to_lambda0", far, Comparator::less, 0.5);
  rb.check("min_pairwise_separation", sep, Comparator::greater, 1e-6);
  return rb.finish();
}

/// Special parameters of pi tan^2 z + lambda inside a window.
struct Figure1Overlays {
  std::vector<ParamSolveReport> virtual_cycle;  // truncated, asymptotic value lambda - pi
  std::vector<ParamSolveReport> centers;
  std::vector<ParamSolveReport> misiurewicz;
};

inline Figure1Overlays figure1_overlays(const Window& win = {}) {
  const FamilySpec fam = get_family("tansq");
  auto inside = [&win](Complex l) {
    return l.real() >= win.re_min && l.real() <= win.re_max && l.imag() >= win.im_min && l.imag() <= win.im_max;
  };
  std::vector<Complex> lattice;
  for (double re = win.re_min; re <= win.re_max + 1e-12; re += 0.75)
    for (double im = win.im_min; im <= win.im_max + 1e-12; im += 0.75) lattice.emplace_back(re, im);

  auto collect = [&](std::vector<ParamSolveReport>& out, std::span<const Complex> seeds, auto&& solve) {
    for (const Complex& s : seeds) {
      try {
        ParamSolveReport r = solve(s);
        if (!inside(r.lambda)) continue;
        if (std::any_of(out.begin(), out.end(), [&](const ParamSolveReport& o) {
              return std::abs(o.lambda - r.lambda) < 1e-6;
            }))
          continue;
        out.push_back(std::move(r));
      } catch (const Error&) {
      }
    }
  };

  Figure1Overlays ov;
  // Order 1: lambda - pi = (k + 1/2) pi.
  for (long k = -6; k <= 6; ++k) {
    const Complex seed{(k + 1.5) * kPi + 0.01, 0.01};
    if (!inside(seed)) continue;
    const Complex one[] = {seed};
    collect(ov.virtual_cycle, one, [&](Complex s) { return solve_truncated(fam, 1, 1, k, s); });
  }
  // Order 2: f(lambda - pi) = (k + 1/2) pi.
  for (long k = -4; k <= 4; ++k)
    collect(ov.virtual_cycle, lattice, [&](Complex s) { return solve_truncated(fam, 1, 2, k, s); });

  std::vector<Complex> kpi;
  for (int k = -3; k <= 3; ++k) kpi.emplace_back(k * kPi + 0.01, 0.01);
  collect(ov.centers, kpi, [&](Complex s) { return solve_center(fam, 0, 1, s); });
  collect(ov.centers, lattice, [&](Complex s) { return solve_center(fam, 0, 2, s); });
  collect(ov.misiurewicz, lattice, [&](Complex s) { return solve_misiurewicz(fam, 0, 2, 1, s); });
  return ov;
}

inline ExperimentReport exp_figure1(const ExperimentOptions& opts = {}) {
  detail::ReportBuilder rb("figure1", opts);
  const FamilySpec fam = get_family("tansq");
  RenderConfig cfg;
  cfg.workers = opts.workers;
  const Figure1Overlays ov = figure1_overlays(cfg.window);
  for (const auto* list : {&ov.virtual_cycle, &ov.centers, &ov.misiurewicz})
    cfg.overlays.insert(cfg.overlays.end(), list->begin(), list->end());

  double worst = 0.0;
  for (const auto& r : cfg.overlays) worst = std::max(worst, revalidate(fam, r));
  auto near = [&](Complex target) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : ov.virtual_cycle) best = std::min(best, std::abs(r.lambda - target));
    return best;
  };
  int order1 = 0;
  for (const auto& r : ov.virtual_cycle) order1 += r.order == 1 ? 1 : 0;

  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = render_grid(fam, cfg);
  const double render_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto hist = grid.label_histogram();
  const double attracting = hist.count("attracting") ? static_cast<double>(hist.at("attracting")) : 0.0;
  const double fraction = attracting / static_cast<double>(grid.cells.size());

  bool written = false;
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    const std::string ppm = (std::filesystem::path(opts.out_dir) / "figure1.ppm").string();
    const std::string json = (std::filesystem::path(opts.out_dir) / "figure1.json").string();
    export_grid(fam, grid, cfg, ExportFormat::ppm, ppm);
    export_grid(fam, grid, cfg, ExportFormat::json, json);
    rb.artifacts() = {ppm, json};
    written = true;
  }

  auto& d = rb.details();
  d["label_counts"] = hist;
  d["virtual_cycle_parameters"] = ov.virtual_cycle.size();
  d["order1_virtual_cycle_parameters"] = order1;
  d["centers"] = ov.centers.size();
  d["misiurewicz"] = ov.misiurewicz.size();
  d["render_s"] = render_s;
  rb.check("virtual_cycle_parameters", static_cast<double>(ov.virtual_cycle.size()), Comparator::at_least, 5.0);
  rb.check("centers", static_cast<double>(ov.centers.size()), Comparator::at_least, 3.0);
  rb.check("misiurewicz", static_cast<double>(ov.misiurewicz.size()), Comparator::at_least, 3.0);
  rb.check("overlay_max_residual", worst, Comparator::less, 1e-9);
  rb.check("dist_to_pi_over_2", near(kPi / 2), Comparator::less, 1e-9);
  rb.check("dist_to_3pi_over_2", near(1.5 * kPi), Comparator::less, 1e-9);
  rb.check("attracting_fraction", fraction, Comparator::at_least, 0.01);
  rb.check("render_s", render_s, Comparator::less, 120.0);
  if (!opts.out_dir.empty()) rb.check("artifacts_written", written ? 1.0 : 0.0, Comparator::equal, 1.0);
  return rb.finish();
}

/// Runs a named experiment.
inline ExperimentReport run_experiment(std::string_view name, const ExperimentOptions& opts = {}) {
  if (name == "thmB_tangent") return exp_thmB_tangent(opts);
  if (name == "thmA_limit_vc") return exp_thmA_limit_vc(opts);
  if (name == "thmD_parabolic") return exp_thmD_parabolic(opts);
  if (name == "el92_no_exit") return exp_el92_no_exit(opts);
  if (name == "shooting_density") return exp_shooting_density(opts);
  if (name == "figure1") return exp_figure1(opts);
  std::string names;
  for (auto n : kExperimentNames) names += (names.empty() ? "" : ", ") + std::string(n);
  throw UnknownNameError("unknown experiment '" + std::string(name) + "'; valid names: " + names);
}

}  // namespace merobif
