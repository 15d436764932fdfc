#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "merobif/cycle.hpp"
#include "merobif/errors.hpp"
#include "merobif/family.hpp"
#include "merobif/sphere.hpp"

namespace merobif {

inline constexpr double kAcceptResidual = 1e-9;

enum class SolveKind { center, sv_periodic, truncated, misiurewicz, shooting, parabolic };

inline std::string_view to_string(SolveKind k) {
  switch (k) {
    case SolveKind::center: return "center";
    case SolveKind::sv_periodic: return "sv-periodic";
    case SolveKind::truncated: return "truncated";
    case SolveKind::misiurewicz: return "misiurewicz";
    case SolveKind::shooting: return "shooting";
    case SolveKind::parabolic: return "parabolic";
  }
  return "?";
}

/// A polished special parameter together with everything needed to
/// re-evaluate its defining relation (see revalidate()).
struct ParamSolveReport {
  std::string family;
  SolveKind kind = SolveKind::center;
  Complex lambda;
  double residual = 0.0;
  std::size_t sv_index = 0;
  /// "virtual-cycle-parameter" / "critical-prepole" for truncated reports.
  std::string flavor;
  int order = 0;      // truncated: f^order(v) = infinity; parabolic: n of the solved system
  int period = 0;     // center, misiurewicz, parabolic
  int preperiod = 0;  // misiurewicz, counted from the critical point
  long pole_index = 0;
  std::optional<Complex> pole;
  std::optional<Complex> critical_point;
  std::optional<Complex> landing_multiplier;
  std::optional<Complex> target;  // shooting: target value at lambda
  std::optional<Complex> cycle_point;
  std::optional<Complex> omega;
  /// Free-form verification flags, e.g. {"repelling", true}.
  std::vector<std::pair<std::string, bool>> verification;
};

struct NewtonOptions {
  int max_steps = 80;
  /// Steps are clipped to this length.
  double max_step = 0.5;
  double accept = kAcceptResidual;
};

struct NewtonResult {
  Complex root;
  double residual = 0.0;
};

/// Scalar complex Newton with a central-difference derivative
/// (h = 1e-6 max(1, |lambda|)). Keeps iterating past `accept` while the
/// residual still shrinks.
inline NewtonResult newton_lambda(const std::function<Complex(Complex)>& g, Complex seed,
                                  const NewtonOptions& opts = {}) {
  auto finite = [](Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  Complex lambda = seed;
  Complex value = g(lambda);
  if (!finite(value)) throw ConvergenceError("newton: defining function is infinite at the seed");
  NewtonResult best{lambda, std::abs(value)};
  int polish = 0;
  for (int step = 0; step < opts.max_steps; ++step) {
    if (std::abs(value) < opts.accept && (std::abs(value) == 0.0 || ++polish > 4)) break;
    const double h = 1e-6 * std::max(1.0, std::abs(lambda));
    const Complex gp = g(lambda + h);
    const Complex gm = g(lambda - h);
    if (!finite(gp) || !finite(gm)) break;
    const Complex d = (gp - gm) / (2.0 * h);
    if (std::abs(d) == 0.0) break;
    Complex dl = value / d;
    if (std::abs(dl) > opts.max_step) dl *= opts.max_step / std::abs(dl);
    const Complex next = lambda - dl;
    const Complex next_value = g(next);
    if (!finite(next_value)) break;
    lambda = next;
    value = next_value;
    if (std::abs(value) < best.residual) best = {lambda, std::abs(value)};
    else if (best.residual < opts.accept) break;
  }
  if (!(best.residual < opts.accept))
    throw ConvergenceError("newton: residual " + std::to_string(best.residual) + " above " +
                           std::to_string(opts.accept));
  return best;
}

namespace detail {

inline Complex orbit_value(const FamilySpec& family, Complex lambda, Complex z, int n) {
  const SpherePoint p = iterate_n(family, lambda, canonicalize(z), n);
  if (p.is_infinite()) return {std::numeric_limits<double>::infinity(), 0.0};
  return p.value();
}

inline Complex sv_iterate(const FamilySpec& family, std::size_t sv, Complex lambda, int n) {
  return orbit_value(family, lambda, family.singular_values[sv].value_at(lambda), n);
}

// Rejects relations that vanish on most of a small circle around lambda.
inline void require_non_persistent(const std::function<Complex(Complex)>& g, Complex lambda, const char* who) {
  int nonzero = 0;
  for (int j = 0; j < 8; ++j) {
    const Complex v = g(lambda + std::polar(1e-3, 2.0 * kPi * j / 8));
    if (!(std::abs(v) <= kAcceptResidual)) ++nonzero;  // infinities count as non-vanishing
  }
  if (nonzero < 6)
    throw PersistentRelationError(std::string(who) + ": relation holds on a neighbourhood (persistent)");
}

}  // namespace detail

/// Parameter where the orbit of a singular value is periodic of period n.
/// For a critical value v = f(c) this solves f^{n-1}(v) = c, the critical
/// point c fixed from the seed, and checks that the cycle is superattracting.
/// Asymptotic values give kind sv-periodic via f^n(v) = v.
inline ParamSolveReport solve_center(const FamilySpec& family, std::size_t sv_index, int n, Complex lambda_seed,
                                     const NewtonOptions& opts = {}) {
  if (n < 1) throw PreconditionError("solve_center: period must be >= 1");
  const SingularValueSpec& sv = family.singular_value(sv_index);
  ParamSolveReport r;
  r.family = family.name;
  r.sv_index = sv_index;
  r.period = n;
  std::function<Complex(Complex)> g;
  if (sv.kind == SingularKind::critical && sv.critical_point_near) {
    const Complex w0 = detail::sv_iterate(family, sv_index, lambda_seed, n - 1);
    const Complex c = sv.critical_point_near(lambda_seed, std::isfinite(std::abs(w0)) ? w0 : Complex{});
    g = [&family, sv_index, n, c](Complex l) { return detail::sv_iterate(family, sv_index, l, n - 1) - c; };
    r.kind = SolveKind::center;
    r.critical_point = c;
  } else {
    g = [&family, sv_index, n](Complex l) {
      return detail::sv_iterate(family, sv_index, l, n) - family.singular_values[sv_index].value_at(l);
    };
    r.kind = SolveKind::sv_periodic;
  }
  const NewtonResult nr = newton_lambda(g, lambda_seed, opts);
  detail::require_non_persistent(g, nr.root, "solve_center");
  r.lambda = nr.root;
  r.residual = nr.residual;
  const Complex start = r.critical_point ? *r.critical_point : sv.value_at(r.lambda);
  const Cycle cyc = make_cycle(family, r.lambda, n, start);
  if (cyc.period != n)
    throw DegenerateError("solve_center: converged to a cycle of lower period " + std::to_string(cyc.period));
  r.cycle_point = start;
  r.landing_multiplier = cyc.multiplier;
  if (r.kind == SolveKind::center) {
    const bool super = std::abs(cyc.multiplier) < kSuperattractingTol;
    r.verification.emplace_back("superattracting", super);
    if (!super) throw DegenerateError("solve_center: cycle through the critical point is not superattracting");
  }
  return r;
}

/// Truncated parameter of order n: f^{n-1}(v(lambda)) equals pole number pole_index.
inline ParamSolveReport solve_truncated(const FamilySpec& family, std::size_t sv_index, int n, long pole_index,
                                        Complex lambda_seed, const NewtonOptions& opts = {}) {
  if (n < 1) throw PreconditionError("solve_truncated: order must be >= 1");
  if (family.is_entire) throw PreconditionError("solve_truncated: family '" + family.name + "' has no poles");
  const SingularValueSpec& sv = family.singular_value(sv_index);
  auto g = [&family, sv_index, n, pole_index](Complex l) {
    const auto p = family.pole(l, pole_index);
    if (!p) return Complex{std::numeric_limits<double>::infinity(), 0.0};
    return detail::sv_iterate(family, sv_index, l, n - 1) - *p;
  };
  const NewtonResult nr = newton_lambda(g, lambda_seed, opts);
  detail::require_non_persistent(g, nr.root, "solve_truncated");
  ParamSolveReport r;
  r.family = family.name;
  r.kind = SolveKind::truncated;
  r.lambda = nr.root;
  r.residual = nr.residual;
  r.sv_index = sv_index;
  r.order = n;
  r.pole_index = pole_index;
  r.pole = family.pole(nr.root, pole_index);
  r.flavor = sv.kind == SingularKind::asymptotic ? "virtual-cycle-parameter" : "critical-prepole";
  r.verification.emplace_back("orbit-reaches-infinity",
                              iterate_n(family, r.lambda, canonicalize(sv.value_at(r.lambda)), n).is_infinite() ||
                                  r.residual < kAcceptResidual);
  return r;
}

/// Misiurewicz parameter: the singular orbit lands on a repelling n-cycle.
///
/// Preperiod m is counted from the critical point, so the relation is
/// f^{m+n-1}(v) = f^{m-1}(v). Solutions valid for a smaller m or a proper
/// divisor of n are rejected, as are non-repelling landing cycles.
inline ParamSolveReport solve_misiurewicz(const FamilySpec& family, std::size_t sv_index, int m, int n,
                                          Complex lambda_seed, const NewtonOptions& opts = {}) {
  if (m < 1 || n < 1) throw PreconditionError("solve_misiurewicz: preperiod and period must be >= 1");
  family.singular_value(sv_index);
  auto relation = [&family, sv_index](Complex l, int mm, int nn) {
    return detail::sv_iterate(family, sv_index, l, mm + nn - 1) - detail::sv_iterate(family, sv_index, l, mm - 1);
  };
  auto g = [&relation, m, n](Complex l) { return relation(l, m, n); };
  const NewtonResult nr = newton_lambda(g, lambda_seed, opts);
  const Complex lambda = nr.root;
  const Complex landing = detail::sv_iterate(family, sv_index, lambda, m - 1);
  const double scale = std::max(1.0, std::abs(landing));
  for (int mm = 1; mm < m; ++mm) {
    if (std::abs(relation(lambda, mm, n)) < 1e-7 * scale)
      throw DegenerateError("solve_misiurewicz: relation already holds with preperiod " + std::to_string(mm));
  }
  const Cycle cyc = make_cycle(family, lambda, n, landing);
  if (cyc.period != n)
    throw DegenerateError("solve_misiurewicz: landing cycle has period " + std::to_string(cyc.period) +
                          ", a proper divisor of " + std::to_string(n));
  const bool repelling = cyc.type == CycleType::repelling;
  if (!repelling)
    throw DegenerateError("solve_misiurewicz: landing cycle is " + std::string(to_string(cyc.type)) +
                          ", not repelling");
  detail::require_non_persistent(g, lambda, "solve_misiurewicz");
  ParamSolveReport r;
  r.family = family.name;
  r.kind = SolveKind::misiurewicz;
  r.lambda = lambda;
  r.residual = nr.residual;
  r.sv_index = sv_index;
  r.preperiod = m;
  r.period = n;
  r.cycle_point = landing;
  r.landing_multiplier = cyc.multiplier;
  r.verification.emplace_back("repelling", repelling);
  return r;
}

struct ShootOptions {
  double ring_radius = 1e-2;
  int ring_points = 16;
  int shrinks = 6;
  double shrink_factor = 0.25;
  /// Solutions farther than this from the base parameter are ignored.
  double max_distance = 0.5;
};

/// Near a truncated parameter lambda0 of order n, finds lambda with
/// f^{n+1}(v(lambda)) = target(lambda), trying seed rings of shrinking radius.
///
/// When the target is a pole the result is a truncated parameter of order n+2.
inline ParamSolveReport shoot(const FamilySpec& family, std::size_t sv_index, int n,
                              const std::function<Complex(Complex)>& target, Complex lambda0,
                              const ShootOptions& opts = {}) {
  if (family.is_entire)
    throw PreconditionError("shoot: family '" + family.name + "' has no poles; shooting needs a truncated parameter");
  if (n < 1) throw PreconditionError("shoot: order must be >= 1");
  family.singular_value(sv_index);
  {
    const Complex w = detail::sv_iterate(family, sv_index, lambda0, n - 1);
    bool truncated = !std::isfinite(std::abs(w));
    if (!truncated) {
      const auto p = nearest_pole(family, lambda0, w);
      truncated = p && std::abs(*p - w) < 1e-6;
    }
    if (!truncated) throw PreconditionError("shoot: base parameter is not a truncated parameter of order n");
  }
  auto g = [&family, sv_index, n, &target](Complex l) {
    return detail::sv_iterate(family, sv_index, l, n + 1) - target(l);
  };
  double radius = opts.ring_radius;
  for (int ring = 0; ring <= opts.shrinks; ++ring, radius *= opts.shrink_factor) {
    NewtonOptions nopts;
    nopts.max_step = std::min(0.1, 10.0 * radius);
    for (int j = 0; j < opts.ring_points; ++j) {
      const Complex seed = lambda0 + std::polar(radius, 2.0 * kPi * j / opts.ring_points);
      try {
        const NewtonResult nr = newton_lambda(g, seed, nopts);
        if (std::abs(nr.root - lambda0) > opts.max_distance || std::abs(nr.root - lambda0) < 1e-12) continue;
        ParamSolveReport r;
        r.family = family.name;
        r.kind = SolveKind::shooting;
        r.lambda = nr.root;
        r.residual = nr.residual;
        r.sv_index = sv_index;
        r.order = n;
        r.target = target(nr.root);
        const auto p = nearest_pole(family, nr.root, *r.target);
        const bool target_is_pole = p && std::abs(*p - *r.target) < 1e-12;
        r.verification.emplace_back("target-is-pole", target_is_pole);
        if (target_is_pole) {
          r.pole = p;
          r.pole_index = family.nearest_pole_index(nr.root, *p).value_or(0);
        }
        const SpherePoint ft = family.eval(nr.root, *r.target);
        if (ft.is_finite() && std::abs(ft.value() - *r.target) < kAcceptResidual) {
          const Complex mu = family.deriv_z(nr.root, *r.target);
          r.landing_multiplier = mu;
          r.verification.emplace_back("target-fixed-point-repelling", std::abs(mu) > 1.0);
        }
        return r;
      } catch (const NumericalError&) {
      }
    }
  }
  throw ConvergenceError("shoot: all seed rings exhausted");
}

/// Tries up to five targets in order and returns the first success.
inline ParamSolveReport shoot_any(const FamilySpec& family, std::size_t sv_index, int n,
                                  std::span<const std::function<Complex(Complex)>> targets, Complex lambda0,
                                  const ShootOptions& opts = {}) {
  for (std::size_t k = 0; k < targets.size() && k < 5; ++k) {
    try {
      return shoot(family, sv_index, n, targets[k], lambda0, opts);
    } catch (const ConvergenceError&) {
    }
  }
  throw ConvergenceError("shoot_any: no target succeeded");
}

/// Parabolic parameter as a report; wraps solve_parabolic().
inline ParamSolveReport solve_parabolic_report(const FamilySpec& family, int n, Complex omega, Complex lambda_seed,
                                               Complex z_seed) {
  const ParabolicSolution s = solve_parabolic(family, n, omega, lambda_seed, z_seed);
  ParamSolveReport r;
  r.family = family.name;
  r.kind = SolveKind::parabolic;
  r.lambda = s.lambda;
  r.residual = std::max(s.cycle_residual, s.multiplier_residual);
  r.order = n;
  r.period = s.cycle.period;
  r.omega = omega;
  r.cycle_point = s.cycle.points[0];
  r.landing_multiplier = s.cycle.multiplier;
  r.verification.emplace_back("non-persistent", s.non_persistent);
  return r;
}

/// Re-evaluates the defining relation of a report from scratch.
inline double revalidate(const FamilySpec& family, const ParamSolveReport& r) {
  const Complex l = r.lambda;
  switch (r.kind) {
    case SolveKind::center:
      return std::abs(detail::sv_iterate(family, r.sv_index, l, r.period - 1) - r.critical_point.value_or(Complex{}));
    case SolveKind::sv_periodic:
      return std::abs(detail::sv_iterate(family, r.sv_index, l, r.period) -
                      family.singular_value(r.sv_index).value_at(l));
    case SolveKind::truncated: {
      const auto p = family.pole(l, r.pole_index);
      if (!p) return std::numeric_limits<double>::infinity();
      return std::abs(detail::sv_iterate(family, r.sv_index, l, r.order - 1) - *p);
    }
    case SolveKind::misiurewicz:
      return std::abs(detail::sv_iterate(family, r.sv_index, l, r.preperiod + r.period - 1) -
                      detail::sv_iterate(family, r.sv_index, l, r.preperiod - 1));
    case SolveKind::shooting:
      return std::abs(detail::sv_iterate(family, r.sv_index, l, r.order + 1) - r.target.value_or(Complex{}));
    case SolveKind::parabolic: {
      const OrbitJet jet = iterate_jet(family, l, r.cycle_point.value_or(Complex{}), r.order);
      if (jet.value.is_infinite()) return std::numeric_limits<double>::infinity();
      const double cyc = std::abs(jet.value.value() - *r.cycle_point);
      const double mult = std::abs(jet.deriv - r.omega.value_or(Complex{1.0, 0.0}));
      return std::max(cyc, mult);
    }
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Winding numbers and zero certification

/// A closed polyline; samples.front() == samples.back().
class Contour {
 public:
  explicit Contour(std::vector<Complex> samples, std::size_t basepoint = 0)
      : samples_(std::move(samples)), basepoint_(basepoint) {
    if (samples_.size() < 65) throw PreconditionError("Contour: need at least 64 distinct samples plus closure");
    if (samples_.front() != samples_.back()) throw PreconditionError("Contour: polyline is not closed");
    if (basepoint_ >= samples_.size()) throw PreconditionError("Contour: basepoint out of range");
  }

  /// Circle traversed `turns` times counter-clockwise with n samples per turn.
  static Contour circle(Complex center, double radius, int n = 128, int turns = 1) {
    std::vector<Complex> s;
    const int total = n * turns;
    s.reserve(static_cast<std::size_t>(total) + 1);
    for (int k = 0; k < total; ++k) s.push_back(center + std::polar(radius, 2.0 * kPi * k / n));
    s.push_back(s.front());
    return Contour(std::move(s));
  }

  /// Samples of an arbitrary closed curve c(t), t in [0, 1].
  static Contour sample(const std::function<Complex(double)>& c, int n = 128) {
    std::vector<Complex> s;
    s.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k < n; ++k) s.push_back(c(static_cast<double>(k) / n));
    s.push_back(s.front());
    return Contour(std::move(s));
  }

  const std::vector<Complex>& samples() const { return samples_; }
  std::size_t basepoint() const { return basepoint_; }

 private:
  std::vector<Complex> samples_;
  std::size_t basepoint_;
};

namespace detail {

inline double segment_distance(Complex a, Complex b, Complex p) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(a + t * ab - p);
}

// Winding of a closed polyline (first == last). Each straight segment subtends
// an angle in (-pi, pi), so the sum is exact up to rounding.
inline int polyline_winding(std::span<const Complex> pts, Complex p) {
  double min_d = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    min_d = std::min(min_d, segment_distance(pts[k], pts[k + 1], p));
    scale = std::max(scale, std::abs(pts[k] - p));
  }
  if (!(min_d > 1e-14 * std::max(1.0, scale))) throw DomainError("winding_number: point lies on the curve");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) total += std::arg((pts[k + 1] - p) / (pts[k] - p));
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.05) throw NumericalError("winding_number: refinement failure (non-integer sum)");
  return static_cast<int>(rounded);
}

}  // namespace detail

/// Winding number of the contour around P.
inline int winding_number(const Contour& curve, Complex p) { return detail::polyline_winding(curve.samples(), p); }

/// Winding number of a smooth closed curve c(t), t in [0, 1], around P.
/// The parameter interval is bisected until every segment turns by less than
/// pi/4 as seen from P and its midpoint agrees (both halves small, turns add up),
/// which keeps coarse samples of a fast loop from aliasing.
inline int winding_number(const std::function<Complex(double)>& c, Complex p, int initial_samples = 128,
                          int max_depth = 30) {
  double total = 0.0;
  std::function<void(double, double, Complex, Complex, int)> walk = [&](double t0, double t1, Complex a, Complex b,
                                                                        int depth) {
    if (std::abs(a - p) == 0.0 || std::abs(b - p) == 0.0) throw DomainError("winding_number: point lies on the curve");
    const double d = std::arg((b - p) / (a - p));
    const double tm = 0.5 * (t0 + t1);
    const Complex m = c(tm);
    if (std::abs(m - p) == 0.0) throw DomainError("winding_number: point lies on the curve");
    const double d1 = std::arg((m - p) / (a - p));
    const double d2 = std::arg((b - p) / (m - p));
    if (std::abs(d) < kPi / 4.0 && std::abs(d1) < kPi / 4.0 && std::abs(d2) < kPi / 4.0 &&
        std::abs(d1 + d2 - d) < 1e-9) {
      total += d;
      return;
    }
    if (depth >= max_depth) throw NumericalError("winding_number: refinement failure");
    walk(t0, tm, a, m, depth + 1);
    walk(tm, t1, m, b, depth + 1);
  };
  Complex prev = c(0.0);
  for (int k = 1; k <= initial_samples; ++k) {
    const double t1 = static_cast<double>(k) / initial_samples;
    const Complex cur = k == initial_samples ? c(0.0) : c(t1);
    walk(static_cast<double>(k - 1) / initial_samples, t1, prev, cur, 0);
    prev = cur;
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.05) throw NumericalError("winding_number: refinement failure");
  return static_cast<int>(rounded);
}

enum class CertifyOutcome { certified, hypothesis_failed, inconclusive };

inline std::string_view to_string(CertifyOutcome o) {
  switch (o) {
    case CertifyOutcome::certified: return "certified";
    case CertifyOutcome::hypothesis_failed: return "hypothesis_failed";
    case CertifyOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CertifyResult {
  CertifyOutcome outcome = CertifyOutcome::inconclusive;
  /// wind(F - G, 0); only meaningful when the hypothesis held.
  int winding = 0;
  double min_separation = 0.0;
  /// wind(G, P_F) + wind(F, P_G), when both curves avoid the base points.
  std::optional<int> split_winding;
};

inline constexpr double kDisjointTol = 1e-9;

/// Decides whether f = g has a solution inside a contour from the boundary
/// values f(lambda(t_k)) and g(lambda(t_k)), both closed sample lists.
inline CertifyResult certify_zero(std::span<const Complex> f_on_contour, std::span<const Complex> g_on_contour) {
  if (f_on_contour.size() != g_on_contour.size())
    throw UsageError("certify_zero: sample counts differ (" + std::to_string(f_on_contour.size()) + " vs " +
                     std::to_string(g_on_contour.size()) + ")");
  if (f_on_contour.size() < 3) throw UsageError("certify_zero: too few samples");
  CertifyResult res;
  std::vector<Complex> diff(f_on_contour.size());
  res.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < diff.size(); ++k) {
    diff[k] = f_on_contour[k] - g_on_contour[k];
    res.min_separation = std::min(res.min_separation, std::abs(diff[k]));
  }
  if (!(res.min_separation > kDisjointTol)) {
    res.outcome = CertifyOutcome::hypothesis_failed;
    return res;
  }
  if (diff.front() != diff.back()) diff.push_back(diff.front());
  try {
    res.winding = detail::polyline_winding(diff, Complex{});
  } catch (const DomainError&) {
    res.outcome = CertifyOutcome::hypothesis_failed;
    return res;
  } catch (const NumericalError&) {
    res.outcome = CertifyOutcome::inconclusive;
    return res;
  }
  try {
    std::vector<Complex> fs(f_on_contour.begin(), f_on_contour.end());
    std::vector<Complex> gs(g_on_contour.begin(), g_on_contour.end());
    if (fs.front() != fs.back()) fs.push_back(fs.front());
    if (gs.front() != gs.back()) gs.push_back(gs.front());
    res.split_winding = detail::polyline_winding(gs, f_on_contour[0]) + detail::polyline_winding(fs, g_on_contour[0]);
  } catch (const Error&) {
  }
  res.outcome = res.winding > 0 ? CertifyOutcome::certified : CertifyOutcome::inconclusive;
  return res;
}

/// Point at parameter t in [0, 1] on the contour polyline.
inline Complex contour_point(const Contour& contour, double t) {
  const auto& s = contour.samples();
  const double x = std::clamp(t, 0.0, 1.0) * static_cast<double>(s.size() - 1);
  const std::size_t k = std::min(static_cast<std::size_t>(x), s.size() - 2);
  const double u = x - static_cast<double>(k);
  return s[k] + u * (s[k + 1] - s[k]);
}

/// certify_zero for callables: the sampled test decides disjointness and the
/// winding of f - g is recomputed with adaptive refinement along the contour.
inline CertifyResult certify_zero(const std::function<Complex(Complex)>& f, const std::function<Complex(Complex)>& g,
                                  const Contour& contour) {
  std::vector<Complex> fs, gs;
  fs.reserve(contour.samples().size());
  gs.reserve(contour.samples().size());
  for (const Complex& l : contour.samples()) {
    fs.push_back(f(l));
    gs.push_back(g(l));
  }
  CertifyResult res = certify_zero(fs, gs);
  if (res.outcome == CertifyOutcome::hypothesis_failed) return res;
  const auto diff = [&](double t) {
    const Complex l = contour_point(contour, t);
    return f(l) - g(l);
  };
  try {
    res.winding = winding_number(diff, Complex{}, static_cast<int>(contour.samples().size() - 1));
  } catch (const DomainError&) {
    res.outcome = CertifyOutcome::hypothesis_failed;
    return res;
  } catch (const NumericalError&) {
    res.outcome = CertifyOutcome::inconclusive;
    return res;
  }
  res.outcome = res.winding > 0 ? CertifyOutcome::certified : CertifyOutcome::inconclusive;
  return res;
}

}  // namespace merobif
