#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "merobif/cycle.hpp"
#include "merobif/errors.hpp"
#include "merobif/family.hpp"
#include "merobif/sphere.hpp"

namespace merobif {

/// Thresholds of the orbit classifier.
struct OrbitConfig {
  double escape_radius = 1e6;
  int escape_persist = 10;
  int max_period = 64;
  int tail_length = 256;
  double cycle_detect_tol = 1e-8;
  int max_iter = 2000;
  /// A near-pole point maps to infinity when a pole lies within this distance.
  double pole_confirm_tol = 1e-9;
};

struct AttractedToCycle {
  int period = 0;
  Complex multiplier;
  Complex representative;
};

/// f^order(z0) = infinity.
struct HitsPole {
  int order = 0;
};

struct Escapes {
  int at_iter = 0;
};

struct Undetermined {
  int max_iter = 0;
};

using OrbitFate = std::variant<AttractedToCycle, HitsPole, Escapes, Undetermined>;

inline std::string_view fate_kind(const OrbitFate& fate) {
  static constexpr std::string_view names[] = {"AttractedToCycle", "HitsPole", "Escapes", "Undetermined"};
  return names[fate.index()];
}

/// Compact description without commas, e.g. "AttractedToCycle:2" or "HitsPole:1".
inline std::string describe(const OrbitFate& fate) {
  std::string s(fate_kind(fate));
  if (auto* a = std::get_if<AttractedToCycle>(&fate)) return s + ":" + std::to_string(a->period);
  if (auto* h = std::get_if<HitsPole>(&fate)) return s + ":" + std::to_string(h->order);
  if (auto* e = std::get_if<Escapes>(&fate)) return s + ":" + std::to_string(e->at_iter);
  return s + ":" + std::to_string(std::get<Undetermined>(fate).max_iter);
}

struct OrbitTrace {
  std::vector<SpherePoint> points;
  OrbitFate fate = Undetermined{};
  int iterations_used = 0;
};

struct TailCycle {
  int period = 0;
  Complex representative;
};

namespace detail {

inline bool smaller_representative(Complex a, Complex b) {
  const double ra = std::abs(a);
  const double rb = std::abs(b);
  if (ra != rb) return ra < rb;
  return std::arg(a) < std::arg(b);
}

// Scan of the last `window` points for the smallest period.
inline std::optional<TailCycle> scan_tail(std::span<const SpherePoint> pts, std::size_t window,
                                          const OrbitConfig& cfg) {
  if (window > pts.size()) window = pts.size();
  if (window < 2) return std::nullopt;
  const auto tail = pts.subspan(pts.size() - window);
  for (const auto& p : tail)
    if (p.is_infinite()) return std::nullopt;
  const std::size_t p_max = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_period), window - 1);
  for (std::size_t p = 1; p <= p_max; ++p) {
    bool periodic = true;
    // Walk backwards: the most recent points are the best converged.
    for (std::size_t k = window - p; k-- > 0;) {
      if (chordal_dist(tail[k + p], tail[k]) >= cfg.cycle_detect_tol) {
        periodic = false;
        break;
      }
    }
    if (!periodic) continue;
    Complex rep = tail[window - 1].value();
    for (std::size_t k = window - p; k < window; ++k)
      if (smaller_representative(tail[k].value(), rep)) rep = tail[k].value();
    return TailCycle{static_cast<int>(p), rep};
  }
  return std::nullopt;
}

inline std::optional<AttractedToCycle> polish_attractor(const FamilySpec& family, Complex lambda,
                                                        const TailCycle& tc) {
  try {
    const Cycle c = refine_cycle(family, lambda, tc.period, tc.representative);
    if (!(std::abs(c.multiplier) < 1.0)) return std::nullopt;
    Complex rep = c.points[0];
    for (const Complex& z : c.points)
      if (smaller_representative(z, rep)) rep = z;
    return AttractedToCycle{c.period, c.multiplier, rep};
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Periodicity scan over the last min(tail_length, finite length) entries of a trace.
inline std::optional<TailCycle> detect_cycle_in_tail(const OrbitTrace& trace, const OrbitConfig& cfg = {}) {
  std::size_t finite = trace.points.size();
  while (finite > 0 && trace.points[finite - 1].is_infinite()) --finite;
  return detail::scan_tail(std::span(trace.points).first(finite), static_cast<std::size_t>(cfg.tail_length), cfg);
}

/// Forward orbit of z0 with fate classification.
///
/// Reaching infinity is a pole hit for meromorphic families and an escape for
/// entire ones. A large value produced from a point within pole_confirm_tol of
/// a pole is also read as a pole hit. Meromorphic orbits only count as escaping
/// if they stay beyond escape_radius until max_iter.
inline OrbitTrace iterate_orbit(const FamilySpec& family, Complex lambda, Complex z0, int max_iter,
                                const OrbitConfig& cfg = {}) {
  if (max_iter < 1) throw PreconditionError("iterate_orbit: max_iter must be >= 1");
  OrbitTrace trace;
  trace.points.reserve(static_cast<std::size_t>(max_iter) + 1);
  trace.points.push_back(canonicalize(z0));
  if (trace.points[0].is_infinite()) throw DomainError("iterate_orbit: starting point is infinite");

  int run_start = -1;  // first index of the current stretch beyond escape_radius
  for (int k = 1; k <= max_iter; ++k) {
    const Complex prev = trace.points.back().value();
    SpherePoint next = family.eval(lambda, prev);
    if (next.is_finite() && !family.is_entire && next.abs() > cfg.escape_radius) {
      const auto p = nearest_pole(family, lambda, prev);
      if (p && std::abs(*p - prev) < cfg.pole_confirm_tol) next = SpherePoint::infinity();
    }
    trace.points.push_back(next);
    trace.iterations_used = k;
    if (next.is_infinite()) {
      if (family.is_entire)
        trace.fate = Escapes{run_start >= 0 ? run_start : k};
      else
        trace.fate = HitsPole{k};
      return trace;
    }
    if (next.abs() > cfg.escape_radius) {
      if (run_start < 0) run_start = k;
      if (family.is_entire && k - run_start + 1 >= cfg.escape_persist) {
        trace.fate = Escapes{run_start};
        return trace;
      }
    } else {
      run_start = -1;
    }
    const bool checkpoint = (k % 64 == 0 && k >= 2 * cfg.max_period) || k == max_iter;
    if (checkpoint && run_start < 0) {
      const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(cfg.tail_length),
                                                       trace.points.size() / 2 + 1);
      if (auto tc = detail::scan_tail(trace.points, window, cfg)) {
        if (auto a = detail::polish_attractor(family, lambda, *tc)) {
          trace.fate = *a;
          return trace;
        }
      }
    }
  }
  if (run_start >= 0 && !family.is_entire) {
    trace.fate = Escapes{run_start};
  } else {
    trace.fate = Undetermined{max_iter};
  }
  return trace;
}

/// Fate of the orbit of singular value sv_index at lambda.
inline OrbitFate classify_singular_orbit(const FamilySpec& family, Complex lambda, std::size_t sv_index,
                                         const OrbitConfig& cfg = {}) {
  const Complex v = family.singular_value(sv_index).value_at(lambda);
  if (!canonicalize(v).is_finite()) return HitsPole{0};
  return iterate_orbit(family, lambda, v, cfg.max_iter, cfg).fate;
}

struct PassiveConfident {
  int period = 0;
};

enum class ActivityWitness { fate_kinds_differ, non_persistent_pole_hit, attracting_periods_differ };

inline std::string_view to_string(ActivityWitness w) {
  switch (w) {
    case ActivityWitness::fate_kinds_differ: return "fate-kinds-differ";
    case ActivityWitness::non_persistent_pole_hit: return "non-persistent-pole-hit";
    case ActivityWitness::attracting_periods_differ: return "attracting-periods-differ";
  }
  return "?";
}

struct ActiveConfident {
  ActivityWitness witness;
  Complex lambda_a;
  OrbitFate fate_a;
  Complex lambda_b;
  OrbitFate fate_b;
  std::string description;
};

struct UnknownActivity {
  std::string reason;
};

using ActivityVerdict = std::variant<PassiveConfident, ActiveConfident, UnknownActivity>;

/// Heuristic activity test: compares the singular orbit at lambda0 with
/// n_samples parameters on circles of radius radius/2 and radius.
/// A finite sample can never prove normality, so Unknown is a legitimate answer.
inline ActivityVerdict activity_probe(const FamilySpec& family, Complex lambda0, std::size_t sv_index, double radius,
                                      int n_samples, const OrbitConfig& cfg = {}) {
  if (!family.finite_type)
    throw PreconditionError("activity_probe: family '" + family.name + "' is not of finite type");
  if (!(radius > 0.0)) throw PreconditionError("activity_probe: radius must be positive");
  if (n_samples < 8) throw PreconditionError("activity_probe: need at least 8 samples");

  std::vector<Complex> params{lambda0};
  const int inner = n_samples / 2;
  const int outer = n_samples - inner;
  for (int j = 0; j < inner; ++j) params.push_back(lambda0 + std::polar(radius / 2.0, 2.0 * kPi * j / inner));
  for (int j = 0; j < outer; ++j) params.push_back(lambda0 + std::polar(radius, 2.0 * kPi * j / outer));
  std::vector<OrbitFate> fates;
  fates.reserve(params.size());
  for (const Complex& l : params) fates.push_back(classify_singular_orbit(family, l, sv_index, cfg));

  auto make_active = [&](ActivityWitness w, std::size_t a, std::size_t b) {
    ActiveConfident ac{w, params[a], fates[a], params[b], fates[b], {}};
    ac.description = std::string(to_string(w)) + ": " + describe(fates[a]) + " vs " + describe(fates[b]);
    return ActivityVerdict{ac};
  };

  // (b) a pole hit whose order is not shared by every sample.
  for (std::size_t a = 0; a < fates.size(); ++a) {
    const auto* h = std::get_if<HitsPole>(&fates[a]);
    if (!h) continue;
    for (std::size_t b = 0; b < fates.size(); ++b) {
      const auto* hb = std::get_if<HitsPole>(&fates[b]);
      if (!hb || hb->order != h->order) return make_active(ActivityWitness::non_persistent_pole_hit, a, b);
    }
  }
  // (a) different kinds of fate.
  for (std::size_t b = 1; b < fates.size(); ++b)
    if (fates[b].index() != fates[0].index()) return make_active(ActivityWitness::fate_kinds_differ, 0, b);
  // All fates now share one kind.
  if (std::holds_alternative<AttractedToCycle>(fates[0])) {
    const int p0 = std::get<AttractedToCycle>(fates[0]).period;
    for (std::size_t b = 1; b < fates.size(); ++b)
      if (std::get<AttractedToCycle>(fates[b]).period != p0)
        return make_active(ActivityWitness::attracting_periods_differ, 0, b);
    return PassiveConfident{p0};
  }
  if (std::holds_alternative<Escapes>(fates[0]))
    return UnknownActivity{"orbit escapes at every sample; normality cannot be decided from samples"};
  if (std::holds_alternative<HitsPole>(fates[0]))
    return UnknownActivity{"pole relation holds at every sample (persistent at this scale)"};
  return UnknownActivity{"no sample reached a definite fate"};
}

}  // namespace merobif
