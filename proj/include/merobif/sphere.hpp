#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>

#include "merobif/errors.hpp"

namespace merobif {

using Complex = std::complex<double>;

/// Finite values at or above this magnitude are treated as the point at infinity.
inline constexpr double kOverflowCap = 1e15;

/// A point of the Riemann sphere: a finite complex value or infinity.
///
/// Instances are only produced through canonicalize() or infinity(), so a
/// finite point always has magnitude below kOverflowCap.
class SpherePoint {
 public:
  constexpr SpherePoint() = default;

  static constexpr SpherePoint infinity() {
    SpherePoint p;
    p.infinite_ = true;
    return p;
  }

  friend SpherePoint canonicalize(Complex x);

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }

  /// The finite value. Throws DomainError at infinity.
  Complex value() const {
    if (infinite_) throw DomainError("SpherePoint::value() called on the point at infinity");
    return value_;
  }

  /// Magnitude, +inf at the point at infinity.
  double abs() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : std::abs(value_);
  }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  Complex value_{0.0, 0.0};
  bool infinite_ = false;
};

/// Maps a raw complex number to the sphere: non-finite components or
/// |x| >= kOverflowCap become infinity, everything else is kept as is.
inline SpherePoint canonicalize(Complex x) {
  SpherePoint p;
  const double re = x.real();
  const double im = x.imag();
  if (!std::isfinite(re) || !std::isfinite(im) || std::hypot(re, im) >= kOverflowCap) {
    p.infinite_ = true;
  } else {
    p.value_ = x;
  }
  return p;
}

inline SpherePoint canonicalize(SpherePoint p) { return p; }

/// Chordal distance 2|a-b| / sqrt((1+|a|^2)(1+|b|^2)), extended to infinity.
inline double chordal_dist(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  const Complex za = a.value();
  const Complex zb = b.value();
  return 2.0 * std::abs(za - zb) / std::sqrt((1.0 + std::norm(za)) * (1.0 + std::norm(zb)));
}

inline double chordal_dist(Complex a, Complex b) { return chordal_dist(canonicalize(a), canonicalize(b)); }

inline std::string to_string(const SpherePoint& p) {
  if (p.is_infinite()) return "inf";
  const Complex z = p.value();
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace merobif
