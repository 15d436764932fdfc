#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "merobif/errors.hpp"
#include "merobif/family.hpp"
#include "merobif/sphere.hpp"

namespace merobif {

inline constexpr double kCycleResidualTol = 1e-9;
inline constexpr double kSuperattractingTol = 1e-8;
inline constexpr double kIndifferentBand = 1e-4;
inline constexpr double kRootOfUnityTol = 1e-4;
inline constexpr int kMaxRootDenominator = 12;
inline constexpr int kMaxNewtonSteps = 60;

/// f^n(z) together with (f^n)'(z) and log|(f^n)'(z)|, accumulated by the chain rule.
struct OrbitJet {
  SpherePoint value;
  Complex deriv{1.0, 0.0};
  double log_abs_deriv = 0.0;
};

/// Iterates z n times. Stops early (value = infinity) when the orbit hits a pole.
inline OrbitJet iterate_jet(const FamilySpec& family, Complex lambda, Complex z, int n) {
  OrbitJet jet;
  jet.value = canonicalize(z);
  for (int k = 0; k < n; ++k) {
    if (jet.value.is_infinite()) return jet;
    const Complex w = jet.value.value();
    jet.deriv *= family.deriv_z(lambda, w);
    jet.log_abs_deriv += family.log_abs_deriv_z(lambda, w);
    jet.value = family.eval(lambda, w);
  }
  return jet;
}

/// f^n(z) as a sphere point.
inline SpherePoint iterate_n(const FamilySpec& family, Complex lambda, SpherePoint z, int n) {
  for (int k = 0; k < n && z.is_finite(); ++k) z = family.eval(lambda, z.value());
  return z;
}

enum class CycleType { superattracting, attracting, parabolic_candidate, indifferent, repelling };

inline std::string_view to_string(CycleType t) {
  switch (t) {
    case CycleType::superattracting: return "superattracting";
    case CycleType::attracting: return "attracting";
    case CycleType::parabolic_candidate: return "parabolic-candidate";
    case CycleType::indifferent: return "indifferent";
    case CycleType::repelling: return "repelling";
  }
  return "?";
}

struct RootOfUnityMatch {
  int p = 0;
  int q = 1;
  double distance = 0.0;
};

/// Closest e^{2 pi i p/q} with q <= max_q and gcd(p, q) = 1.
inline RootOfUnityMatch nearest_root_of_unity(Complex mu, int max_q = kMaxRootDenominator) {
  RootOfUnityMatch best{0, 1, std::abs(mu - 1.0)};
  for (int q = 1; q <= max_q; ++q) {
    for (int p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double d = std::abs(mu - std::polar(1.0, 2.0 * kPi * p / q));
      if (d < best.distance) best = {p, q, d};
    }
  }
  return best;
}

inline CycleType classify_cycle(Complex mu) {
  const double r = std::abs(mu);
  if (r < kSuperattractingTol) return CycleType::superattracting;
  if (r < 1.0 - kIndifferentBand) return CycleType::attracting;
  if (r > 1.0 + kIndifferentBand) return CycleType::repelling;
  if (nearest_root_of_unity(mu).distance < kRootOfUnityTol) return CycleType::parabolic_candidate;
  return CycleType::indifferent;
}

/// A periodic orbit of exact period `period`.
struct Cycle {
  int period = 0;
  std::vector<Complex> points;
  Complex multiplier;
  /// log|multiplier|, kept separately because the multiplier itself underflows
  /// on cycles that are far out in a tract.
  double log_abs_multiplier = 0.0;
  CycleType type = CycleType::repelling;

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : points) m = std::max(m, std::abs(z));
    return m;
  }

  /// Index of the point of smallest modulus.
  std::size_t anchor() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
      if (std::abs(points[i]) < std::abs(points[best])) best = i;
    return best;
  }
};

/// Largest chordal mismatch between f(points[i]) and points[i+1].
inline double cycle_residual(const FamilySpec& family, Complex lambda, const Cycle& c) {
  double worst = 0.0;
  const std::size_t n = c.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, chordal_dist(family.eval(lambda, c.points[i]), canonicalize(c.points[(i + 1) % n])));
  }
  return worst;
}

/// Builds the cycle through z, which must satisfy f^n(z) ~ z, reduced to its exact period.
inline Cycle make_cycle(const FamilySpec& family, Complex lambda, int n, Complex z) {
  std::vector<Complex> orbit;
  orbit.reserve(static_cast<std::size_t>(n));
  SpherePoint w = canonicalize(z);
  for (int k = 0; k < n; ++k) {
    if (w.is_infinite()) throw PoleHitError("cycle candidate orbit reaches a pole");
    orbit.push_back(w.value());
    w = family.eval(lambda, w.value());
  }
  if (w.is_infinite()) throw PoleHitError("cycle candidate orbit reaches a pole");
  int period = n;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    if (chordal_dist(orbit[static_cast<std::size_t>(d)], orbit[0]) < kCycleResidualTol) {
      period = d;
      break;
    }
  }
  Cycle c;
  c.period = period;
  c.points.assign(orbit.begin(), orbit.begin() + period);
  c.multiplier = Complex{1.0, 0.0};
  for (const Complex& p : c.points) {
    c.multiplier *= family.deriv_z(lambda, p);
    c.log_abs_multiplier += family.log_abs_deriv_z(lambda, p);
  }
  c.type = classify_cycle(c.multiplier);
  return c;
}

/// Newton's method on f^n(z) - z from `seed`; the result has its exact period.
inline Cycle refine_cycle(const FamilySpec& family, Complex lambda, int n, Complex seed) {
  if (n < 1) throw PreconditionError("refine_cycle: period must be >= 1");
  if (!std::isfinite(seed.real()) || !std::isfinite(seed.imag()))
    throw PreconditionError("refine_cycle: seed must be finite");
  Complex z = seed;
  double gap = -1.0;
  for (int step = 0; step <= kMaxNewtonSteps; ++step) {
    const OrbitJet jet = iterate_jet(family, lambda, z, n);
    if (jet.value.is_infinite() || !std::isfinite(std::abs(jet.deriv)))
      throw PoleHitError("refine_cycle: orbit passes through a pole (bad seed)");
    const Complex residual = jet.value.value() - z;
    const Complex slope = jet.deriv - 1.0;
    gap = std::abs(slope);
    if (std::abs(residual) < 1e-12 * std::max(1.0, std::abs(z))) return make_cycle(family, lambda, n, z);
    if (step == kMaxNewtonSteps) break;
    if (gap < 1e-14) throw DegenerateError("refine_cycle: (f^n)'(z) = 1, parabolic-degenerate Newton system");
    Complex dz = residual / slope;
    const double cap = std::max(1.0, std::abs(z));
    if (std::abs(dz) > cap) dz *= cap / std::abs(dz);
    z -= dz;
  }
  throw ConvergenceError("refine_cycle: no convergence in " + std::to_string(kMaxNewtonSteps) + " Newton steps", gap);
}

struct ParabolicSolution {
  Complex lambda;
  Cycle cycle;
  /// |f^n(z) - z| and |(f^n)'(z) - omega| at the returned point.
  double cycle_residual = 0.0;
  double multiplier_residual = 0.0;
  /// Samples around lambda showed the multiplier moving away from omega.
  bool non_persistent = false;
};

namespace detail {

struct ParabolicSystem {
  Complex cycle_eq;
  Complex multiplier_eq;
  Complex slope;  // (f^n)'(z) - 1
  bool finite = true;
};

inline ParabolicSystem parabolic_system(const FamilySpec& family, Complex lambda, Complex z, int n, Complex omega) {
  const OrbitJet jet = iterate_jet(family, lambda, z, n);
  if (jet.value.is_infinite() || !std::isfinite(std::abs(jet.deriv))) return {{}, {}, {}, false};
  return {jet.value.value() - z, jet.deriv - omega, jet.deriv - 1.0, true};
}

}  // namespace detail

/// Two-dimensional Newton in (lambda, z) on f^n(z) = z, (f^n)'(z) = omega.
/// Lambda-derivatives (and the z-derivative of the multiplier equation) are
/// central differences.
inline ParabolicSolution solve_parabolic(const FamilySpec& family, int n, Complex omega, Complex lambda_seed,
                                         Complex z_seed) {
  if (n < 1) throw PreconditionError("solve_parabolic: period must be >= 1");
  if (std::abs(std::abs(omega) - 1.0) > 1e-12) throw PreconditionError("solve_parabolic: omega must lie on the unit circle");
  constexpr double kTol = 1e-10;
  constexpr int kMaxSteps = 100;
  Complex lambda = lambda_seed;
  Complex z = z_seed;
  double best = std::numeric_limits<double>::infinity();
  int polish = 0;
  for (int step = 0; step < kMaxSteps; ++step) {
    const auto g = detail::parabolic_system(family, lambda, z, n, omega);
    if (!g.finite) throw PoleHitError("solve_parabolic: orbit passes through a pole");
    const double res = std::max(std::abs(g.cycle_eq), std::abs(g.multiplier_eq));
    if (res < kTol) {
      // A few extra steps while the residual keeps dropping.
      if (res >= best || ++polish > 3) break;
    }
    best = std::min(best, res);
    const double hl = 1e-6 * std::max(1.0, std::abs(lambda));
    const double hz = 1e-6 * std::max(1.0, std::abs(z));
    const auto lp = detail::parabolic_system(family, lambda + hl, z, n, omega);
    const auto lm = detail::parabolic_system(family, lambda - hl, z, n, omega);
    const auto zp = detail::parabolic_system(family, lambda, z + hz, n, omega);
    const auto zm = detail::parabolic_system(family, lambda, z - hz, n, omega);
    if (!lp.finite || !lm.finite || !zp.finite || !zm.finite)
      throw PoleHitError("solve_parabolic: difference stencil touches a pole");
    const Complex a11 = (lp.cycle_eq - lm.cycle_eq) / (2.0 * hl);
    const Complex a12 = g.slope;
    const Complex a21 = (lp.multiplier_eq - lm.multiplier_eq) / (2.0 * hl);
    const Complex a22 = (zp.multiplier_eq - zm.multiplier_eq) / (2.0 * hz);
    const Complex det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-300) throw DegenerateError("solve_parabolic: singular Jacobian");
    Complex dl = (g.cycle_eq * a22 - a12 * g.multiplier_eq) / det;
    Complex dz = (a11 * g.multiplier_eq - a21 * g.cycle_eq) / det;
    const double cap = 0.5 * std::max(1.0, std::abs(lambda));
    if (std::abs(dl) > cap) {
      const double s = cap / std::abs(dl);
      dl *= s;
      dz *= s;
    }
    lambda -= dl;
    z -= dz;
  }
  const auto g = detail::parabolic_system(family, lambda, z, n, omega);
  if (!g.finite) throw PoleHitError("solve_parabolic: orbit passes through a pole");
  ParabolicSolution sol;
  sol.lambda = lambda;
  sol.cycle_residual = std::abs(g.cycle_eq);
  sol.multiplier_residual = std::abs(g.multiplier_eq);
  if (sol.cycle_residual >= kTol || sol.multiplier_residual >= kTol)
    throw ConvergenceError("solve_parabolic: residuals did not drop below 1e-10");
  sol.cycle = make_cycle(family, lambda, n, z);

  // Persistence filter: follow the cycle to lambda +- 1e-4 (both axes) and
  // look for a multiplier that leaves omega.
  int found = 0;
  int moved = 0;
  const Complex offsets[] = {{1e-4, 0}, {-1e-4, 0}, {0, 1e-4}, {0, -1e-4}};
  const Complex nudges[] = {{0, 0}, {1e-2, 0}, {-1e-2, 0}, {0, 1e-2}, {0, -1e-2}};
  for (const Complex& off : offsets) {
    for (const Complex& nudge : nudges) {
      try {
        const Cycle c = refine_cycle(family, lambda + off, n, z + nudge);
        const std::size_t i = c.anchor();
        if (std::abs(c.points[i] - z) > 0.1 && std::abs(c.points[0] - z) > 0.1) continue;
        const Complex mu_n = iterate_jet(family, lambda + off, c.points[0], n).deriv;
        ++found;
        if (std::abs(mu_n - omega) > 1e-8) ++moved;
        break;
      } catch (const NumericalError&) {
      }
    }
  }
  if (found > 0 && moved == 0)
    throw PersistentRelationError("solve_parabolic: multiplier is locally constant; parabolic cycle is persistent");
  sol.non_persistent = moved > 0;
  return sol;
}

}  // namespace merobif
