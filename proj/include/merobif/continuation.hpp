#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "merobif/cycle.hpp"
#include "merobif/errors.hpp"
#include "merobif/family.hpp"
#include "merobif/sphere.hpp"

namespace merobif {

enum class BranchStatus { completed, exited, collided, lost };

inline std::string_view to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::completed: return "completed";
    case BranchStatus::exited: return "exited";
    case BranchStatus::collided: return "collided";
    case BranchStatus::lost: return "lost";
  }
  return "?";
}

/// A curve lambda(t) in parameter space.
using ParameterPath = std::function<Complex(double)>;

/// A discrete curve in {(lambda, z) : f_lambda^n(z) = z} over a parameter path.
/// cycles[k] lives at path[k] = lambda(t[k]); slot i of every cycle follows
/// the same periodic point.
struct CycleBranchTrace {
  std::vector<double> t;
  std::vector<Complex> path;
  std::vector<Cycle> cycles;
  BranchStatus status = BranchStatus::lost;
  std::string detail;
};

struct ContinuationOptions {
  double min_step = 1e-9;
  /// Status becomes `exited` once some cycle point exceeds this modulus.
  double exit_radius = 1e8;
  double collide_tol = 1e-6;
  /// Largest chordal move of a slot accepted in one step.
  double jump_tol = 0.25;
};

namespace detail {

// Re-indexes `fresh` so that its converged seed point lands in `anchor`.
inline Cycle align_slots(Cycle fresh, std::size_t anchor) {
  const std::size_t n = fresh.points.size();
  std::vector<Complex> rotated(n);
  for (std::size_t i = 0; i < n; ++i) rotated[(anchor + i) % n] = fresh.points[i];
  fresh.points = std::move(rotated);
  return fresh;
}

}  // namespace detail

/// Follows `initial` along lambda(t) over the grid with step halving.
inline CycleBranchTrace continue_cycle_along_path(const FamilySpec& family, const ParameterPath& path,
                                                  std::span<const double> t_grid, const Cycle& initial,
                                                  const ContinuationOptions& opts = {}) {
  if (t_grid.size() < 2) throw PreconditionError("continue_cycle_along_path: grid needs at least two values");
  if (initial.period < 1 || initial.points.size() != static_cast<std::size_t>(initial.period))
    throw PreconditionError("continue_cycle_along_path: invalid initial cycle");
  const Complex lambda0 = path(t_grid[0]);
  if (cycle_residual(family, lambda0, initial) >= kCycleResidualTol)
    throw PreconditionError("continue_cycle_along_path: initial cycle is not a cycle at lambda(t0)");

  const int n = initial.period;
  CycleBranchTrace trace;
  trace.t.push_back(t_grid[0]);
  trace.path.push_back(lambda0);
  trace.cycles.push_back(initial);
  if (initial.max_abs() > opts.exit_radius) {
    trace.status = BranchStatus::exited;
    return trace;
  }

  double t_cur = t_grid[0];
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double target = t_grid[k];
    const double full = target - t_cur;
    double h = full;
    while (t_cur != target) {
      const double remaining = target - t_cur;
      const double step = std::abs(h) >= std::abs(remaining) ? remaining : h;
      const double t_next = std::abs(step) == std::abs(remaining) ? target : t_cur + step;
      const Cycle& prev = trace.cycles.back();
      const std::size_t anchor = prev.anchor();
      const Complex lambda = path(t_next);
      bool ok = false;
      double gap = -1.0;
      Cycle next;
      try {
        next = refine_cycle(family, lambda, n, prev.points[anchor]);
        if (next.period == n) {
          next = detail::align_slots(std::move(next), anchor);
          ok = true;
          for (std::size_t i = 0; i < next.points.size() && ok; ++i)
            ok = chordal_dist(next.points[i], prev.points[i]) < opts.jump_tol;
        } else {
          gap = std::abs(next.multiplier - 1.0);
        }
      } catch (const DegenerateError&) {
        gap = 0.0;
      } catch (const ConvergenceError& e) {
        gap = e.last_multiplier_gap();
      } catch (const NumericalError&) {
      }
      if (ok) {
        trace.t.push_back(t_next);
        trace.path.push_back(lambda);
        trace.cycles.push_back(std::move(next));
        t_cur = t_next;
        if (trace.cycles.back().max_abs() > opts.exit_radius) {
          trace.status = BranchStatus::exited;
          return trace;
        }
        h = std::abs(2.0 * step) < std::abs(full) ? 2.0 * step : full;
        continue;
      }
      h = step / 2.0;
      if (std::abs(h) < opts.min_step) {
        const bool collision = gap >= 0.0 && gap < opts.collide_tol;
        trace.status = collision ? BranchStatus::collided : BranchStatus::lost;
        trace.detail = "step fell below " + std::to_string(opts.min_step) + " at t = " + std::to_string(t_cur);
        return trace;
      }
    }
  }
  trace.status = BranchStatus::completed;
  return trace;
}

/// Per-slot limits of an exited branch.
struct ExitReport {
  int period = 0;
  std::set<std::size_t> exiting_indices;
  /// One entry per slot; infinity for exiting slots.
  std::vector<SpherePoint> bounded_limits;
  Complex lambda_last;
};

struct ExitDetectOptions {
  std::size_t window = 20;
  double exit_radius = 1e8;
  double settle_tol = 1e-6;
};

/// Splits the slots of an exited branch into escaping ones and ones with a finite limit.
///
/// A slot escapes when its modulus grows over the last `window` steps (at least
/// 3/4 of the increments positive) and ends above sqrt(exit_radius). Otherwise
/// the last value is taken as its limit, provided the final two values agree to
/// settle_tol.
inline ExitReport detect_exit(const CycleBranchTrace& branch, const ExitDetectOptions& opts = {}) {
  if (branch.status != BranchStatus::exited)
    throw PreconditionError("detect_exit: branch status is '" + std::string(to_string(branch.status)) +
                            "', expected 'exited'");
  if (branch.cycles.size() < 2) throw InconclusiveError("detect_exit: branch too short to estimate limits");
  const std::size_t count = std::min(opts.window, branch.cycles.size());
  const std::size_t first = branch.cycles.size() - count;
  ExitReport report;
  report.period = branch.cycles.back().period;
  report.lambda_last = branch.path.back();
  for (std::size_t m = 0; m < static_cast<std::size_t>(report.period); ++m) {
    std::size_t ups = 0;
    for (std::size_t k = first + 1; k < branch.cycles.size(); ++k)
      if (std::abs(branch.cycles[k].points[m]) > std::abs(branch.cycles[k - 1].points[m])) ++ups;
    const double last = std::abs(branch.cycles.back().points[m]);
    const bool growing = 4 * ups >= 3 * (count - 1) && last > std::abs(branch.cycles[first].points[m]);
    if (growing && last > std::sqrt(opts.exit_radius)) {
      report.exiting_indices.insert(m);
      report.bounded_limits.push_back(SpherePoint::infinity());
      continue;
    }
    const Complex a = branch.cycles[branch.cycles.size() - 2].points[m];
    const Complex b = branch.cycles.back().points[m];
    if (std::abs(a - b) >= opts.settle_tol)
      throw InconclusiveError("detect_exit: slot " + std::to_string(m) +
                              " has not settled; continue with a smaller minimum step");
    report.bounded_limits.push_back(canonicalize(b));
  }
  return report;
}

struct VirtualCycleEntryCheck {
  bool consistent = true;
  std::string note;
  /// Singular values of f_{lambda0} within tolerance of this entry.
  std::vector<std::size_t> singular_matches;
};

/// Cyclically ordered sphere points, at least one of them infinity, with the
/// consistency checks of a limit of cycles evaluated at lambda0.
class VirtualCycle {
 public:
  explicit VirtualCycle(std::vector<SpherePoint> entries) : entries_(std::move(entries)) {
    if (std::none_of(entries_.begin(), entries_.end(), [](const SpherePoint& p) { return p.is_infinite(); }))
      throw PreconditionError("VirtualCycle: at least one entry must be infinity");
  }

  const std::vector<SpherePoint>& entries() const { return entries_; }

  /// Exactly one entry is infinity.
  bool minimal_length_ok() const {
    return std::count_if(entries_.begin(), entries_.end(), [](const SpherePoint& p) { return p.is_infinite(); }) ==
           1;
  }

  bool all_consistent() const {
    return std::all_of(checks.begin(), checks.end(), [](const VirtualCycleEntryCheck& c) { return c.consistent; });
  }

  std::vector<VirtualCycleEntryCheck> checks;

 private:
  std::vector<SpherePoint> entries_;
};

/// Builds a VirtualCycle and evaluates its per-entry consistency at lambda0:
/// a finite entry must map to its successor; an infinite entry must be followed
/// by an asymptotic value and preceded by infinity or a pole.
inline VirtualCycle check_virtual_cycle(const FamilySpec& family, Complex lambda0, std::vector<SpherePoint> entries,
                                        double tol = 1e-3) {
  VirtualCycle vc(std::move(entries));
  const auto& e = vc.entries();
  const std::size_t n = e.size();
  vc.checks.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    auto& check = vc.checks[m];
    const SpherePoint& next = e[(m + 1) % n];
    const SpherePoint& prev = e[(m + n - 1) % n];
    if (e[m].is_finite()) {
      const double d = chordal_dist(family.eval(lambda0, e[m].value()), next);
      if (d >= tol) {
        check.consistent = false;
        check.note = "f(entry) misses its successor by chordal " + std::to_string(d);
      }
    } else {
      bool succ_ok = false;
      if (next.is_infinite()) {
        succ_ok = family.is_entire && family.transcendental;
      } else {
        for (const auto& sv : family.singular_values) {
          if (sv.kind == SingularKind::asymptotic &&
              chordal_dist(canonicalize(sv.value_at(lambda0)), next) < tol)
            succ_ok = true;
        }
      }
      bool pred_ok = prev.is_infinite();
      if (!pred_ok) {
        const auto p = nearest_pole(family, lambda0, prev.value());
        pred_ok = p && std::abs(*p - prev.value()) < tol;
      }
      if (!succ_ok) check.note = "successor of infinity is not an asymptotic value";
      if (!pred_ok) check.note += (check.note.empty() ? "" : "; ") + std::string("predecessor of infinity is not a pole");
      check.consistent = succ_ok && pred_ok;
    }
    for (std::size_t s = 0; s < family.singular_values.size(); ++s) {
      if (chordal_dist(canonicalize(family.singular_values[s].value_at(lambda0)), e[m]) < tol)
        check.singular_matches.push_back(s);
    }
  }
  return vc;
}

/// The virtual cycle that an exiting branch converges to at lambda0.
inline VirtualCycle limit_virtual_cycle(const ExitReport& report, const FamilySpec& family, Complex lambda0,
                                        double tol = 1e-3) {
  return check_virtual_cycle(family, lambda0, report.bounded_limits, tol);
}

}  // namespace merobif
