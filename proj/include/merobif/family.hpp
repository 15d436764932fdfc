#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "merobif/errors.hpp"
#include "merobif/sphere.hpp"

namespace merobif {

inline constexpr double kPi = std::numbers::pi;

/// |cos z| below this is read as an exact pole of tan.
inline constexpr double kPoleGuard = 1e-14;
/// Default radius used by nearest_pole().
inline constexpr double kPoleSearchRadius = 50.0;

enum class SingularKind { critical, asymptotic };

inline std::string_view to_string(SingularKind k) {
  return k == SingularKind::critical ? "critical" : "asymptotic";
}

/// A singular value v(lambda) of a family, given in closed form.
struct SingularValueSpec {
  SingularKind kind;
  std::string label;
  Complex (*value_at)(Complex lambda);
  /// Critical values only: the critical point over this value closest to z.
  Complex (*critical_point_near)(Complex lambda, Complex z) = nullptr;
};

enum class FamilyId { tangent, tansq, exponential, quadratic, logexp, shiftedexp };

namespace detail {

// tan z with the pole guard; the exponential form is used far from the real
// axis where sin and cos overflow.
inline SpherePoint tan_sphere(Complex z) {
  if (std::abs(z.imag()) < 20.0) {
    const Complex c = std::cos(z);
    if (std::abs(c) < kPoleGuard) return SpherePoint::infinity();
    return canonicalize(std::sin(z) / c);
  }
  const Complex i{0.0, 1.0};
  if (z.imag() > 0) {
    const Complex w = std::exp(2.0 * i * z);
    return canonicalize(i * (1.0 - w) / (1.0 + w));
  }
  const Complex w = std::exp(-2.0 * i * z);
  return canonicalize(-i * (1.0 - w) / (1.0 + w));
}

// sec^2 z, infinite at poles; uses 4w/(1+w)^2 with |w| = e^{-2|Im z|} far out.
inline Complex sec2(Complex z) {
  if (std::abs(z.imag()) < 20.0) {
    const Complex c = std::cos(z);
    if (std::abs(c) < kPoleGuard) return {std::numeric_limits<double>::infinity(), 0.0};
    return 1.0 / (c * c);
  }
  const Complex i{0.0, 1.0};
  const Complex w = z.imag() > 0 ? std::exp(2.0 * i * z) : std::exp(-2.0 * i * z);
  return 4.0 * w / ((1.0 + w) * (1.0 + w));
}

// log|sec^2 z|, finite even where sec2() underflows to zero.
inline double log_abs_sec2(Complex z) {
  if (std::abs(z.imag()) < 20.0) {
    const double c = std::abs(std::cos(z));
    if (c < kPoleGuard) return std::numeric_limits<double>::infinity();
    return -2.0 * std::log(c);
  }
  const Complex i{0.0, 1.0};
  const Complex w = z.imag() > 0 ? std::exp(2.0 * i * z) : std::exp(-2.0 * i * z);
  return std::log(4.0) - 2.0 * std::abs(z.imag()) - 2.0 * std::log(std::abs(1.0 + w));
}

inline Complex half_odd_pi(long k) { return {(static_cast<double>(k) + 0.5) * kPi, 0.0}; }

// Poles (k + 1/2) pi inside the disk |p - center| <= radius.
inline std::vector<Complex> tan_poles(Complex center, double radius) {
  std::vector<Complex> out;
  if (std::abs(center.imag()) > radius) return out;
  const double half = std::sqrt(radius * radius - center.imag() * center.imag());
  const long k_lo = static_cast<long>(std::ceil((center.real() - half) / kPi - 0.5));
  const long k_hi = static_cast<long>(std::floor((center.real() + half) / kPi - 0.5));
  for (long k = k_lo; k <= k_hi; ++k) out.push_back(half_odd_pi(k));
  return out;
}

inline Complex logexp_pole(Complex lambda, long k) {
  return std::log(-1.0 / lambda) + Complex{0.0, 2.0 * kPi * static_cast<double>(k)};
}

}  // namespace detail

/// A built-in one-parameter family lambda -> f_lambda with closed-form data.
class FamilySpec {
 public:
  FamilyId id;
  std::string name;
  std::string formula;
  std::vector<SingularValueSpec> singular_values;
  bool is_entire = false;
  /// False for the demo-only family with infinitely many singular values.
  bool finite_type = true;
  /// True for transcendental maps (infinity is then an essential singularity).
  bool transcendental = true;

  /// f_lambda(z). Throws DomainError for z = infinity.
  SpherePoint eval(Complex lambda, const SpherePoint& z) const { return eval(lambda, z.value()); }

  SpherePoint eval(Complex lambda, Complex z) const {
    switch (id) {
      case FamilyId::tangent: {
        const SpherePoint t = detail::tan_sphere(z);
        if (t.is_infinite()) return t;
        return canonicalize(lambda * t.value());
      }
      case FamilyId::tansq: {
        const SpherePoint t = detail::tan_sphere(z);
        if (t.is_infinite()) return t;
        const Complex tv = t.value();
        return canonicalize(kPi * tv * tv + lambda);
      }
      case FamilyId::exponential:
        return canonicalize(lambda * std::exp(z));
      case FamilyId::quadratic:
        return canonicalize(z * z + lambda);
      case FamilyId::logexp: {
        if (z.real() > 0) {
          const Complex d = std::exp(-z) + lambda;
          if (std::abs(d) < kPoleGuard * std::max(1.0, std::abs(lambda))) return SpherePoint::infinity();
          return canonicalize(1.0 / d);
        }
        const Complex e = std::exp(z);
        const Complex d = 1.0 + lambda * e;
        if (std::abs(d) < kPoleGuard) return SpherePoint::infinity();
        return canonicalize(e / d);
      }
      case FamilyId::shiftedexp:
        return canonicalize(z + lambda + std::exp(z));
    }
    return SpherePoint::infinity();
  }

  /// d/dz f_lambda(z); infinite (non-finite) at poles.
  Complex deriv_z(Complex lambda, Complex z) const {
    switch (id) {
      case FamilyId::tangent:
        return lambda * detail::sec2(z);
      case FamilyId::tansq: {
        const SpherePoint t = detail::tan_sphere(z);
        if (t.is_infinite()) return {std::numeric_limits<double>::infinity(), 0.0};
        return 2.0 * kPi * t.value() * detail::sec2(z);
      }
      case FamilyId::exponential:
        return lambda * std::exp(z);
      case FamilyId::quadratic:
        return 2.0 * z;
      case FamilyId::logexp: {
        if (z.real() > 0) {
          const Complex em = std::exp(-z);
          const Complex d = em + lambda;
          return em / (d * d);
        }
        const Complex e = std::exp(z);
        const Complex d = 1.0 + lambda * e;
        return e / (d * d);
      }
      case FamilyId::shiftedexp:
        return 1.0 + std::exp(z);
    }
    return {};
  }

  /// log|f_lambda'(z)|, accurate where deriv_z() underflows.
  double log_abs_deriv_z(Complex lambda, Complex z) const {
    switch (id) {
      case FamilyId::tangent:
        return std::log(std::abs(lambda)) + detail::log_abs_sec2(z);
      case FamilyId::tansq: {
        const SpherePoint t = detail::tan_sphere(z);
        if (t.is_infinite()) return std::numeric_limits<double>::infinity();
        return std::log(2.0 * kPi * std::abs(t.value())) + detail::log_abs_sec2(z);
      }
      case FamilyId::exponential:
        return std::log(std::abs(lambda)) + z.real();
      default:
        return std::log(std::abs(deriv_z(lambda, z)));
    }
  }

  /// Poles of f_lambda in the closed disk |p - center| <= radius.
  std::vector<Complex> poles(Complex lambda, Complex center, double radius) const {
    switch (id) {
      case FamilyId::tangent:
      case FamilyId::tansq:
        return detail::tan_poles(center, radius);
      case FamilyId::logexp: {
        std::vector<Complex> out;
        if (lambda == Complex{}) return out;
        const Complex base = detail::logexp_pole(lambda, 0);
        if (std::abs(base.real() - center.real()) > radius) return out;
        const double dk = (center.imag() - base.imag()) / (2.0 * kPi);
        const long span = static_cast<long>(std::ceil(radius / (2.0 * kPi))) + 1;
        const long k0 = static_cast<long>(std::lround(dk));
        for (long k = k0 - span; k <= k0 + span; ++k) {
          const Complex p = detail::logexp_pole(lambda, k);
          if (std::abs(p - center) <= radius) out.push_back(p);
        }
        return out;
      }
      default:
        return {};
    }
  }

  /// The pole with index k: (k + 1/2) pi for the tangent families,
  /// log(-1/lambda) + 2 pi i k for logexp, nothing for entire families.
  std::optional<Complex> pole(Complex lambda, long k) const {
    switch (id) {
      case FamilyId::tangent:
      case FamilyId::tansq:
        return detail::half_odd_pi(k);
      case FamilyId::logexp:
        if (lambda == Complex{}) return std::nullopt;
        return detail::logexp_pole(lambda, k);
      default:
        return std::nullopt;
    }
  }

  /// Index of the pole nearest to z, when the family has poles.
  std::optional<long> nearest_pole_index(Complex lambda, Complex z) const {
    switch (id) {
      case FamilyId::tangent:
      case FamilyId::tansq:
        return static_cast<long>(std::floor(z.real() / kPi));
      case FamilyId::logexp: {
        if (lambda == Complex{}) return std::nullopt;
        const Complex base = detail::logexp_pole(lambda, 0);
        return std::lround((z.imag() - base.imag()) / (2.0 * kPi));
      }
      default:
        return std::nullopt;
    }
  }

  /// Omitted values of f_lambda.
  std::vector<Complex> exceptional_values(Complex lambda) const {
    const Complex i{0.0, 1.0};
    switch (id) {
      case FamilyId::tangent:
        return {lambda * i, -lambda * i};
      case FamilyId::tansq:
        return {lambda - kPi};
      case FamilyId::exponential:
        return {Complex{}};
      case FamilyId::logexp:
        if (lambda == Complex{}) return {Complex{}};
        return {Complex{}, 1.0 / lambda};
      default:
        return {};
    }
  }

  const SingularValueSpec& singular_value(std::size_t index) const {
    if (index >= singular_values.size()) {
      throw PreconditionError("singular value index " + std::to_string(index) + " out of range for family '" +
                              name + "' (" + std::to_string(singular_values.size()) + " listed)");
    }
    return singular_values[index];
  }
};

inline constexpr std::array<std::string_view, 6> kFamilyNames = {"tangent",   "tansq",   "exponential",
                                                                  "quadratic", "logexp", "shiftedexp"};

/// Looks up a built-in family by its CLI identifier.
inline FamilySpec get_family(std::string_view name) {
  FamilySpec f;
  f.name = std::string(name);
  if (name == "tangent") {
    f.id = FamilyId::tangent;
    f.formula = "lambda*tan(z)";
    f.singular_values = {
        {SingularKind::asymptotic, "+lambda*i", [](Complex l) { return l * Complex{0.0, 1.0}; }},
        {SingularKind::asymptotic, "-lambda*i", [](Complex l) { return -l * Complex{0.0, 1.0}; }},
    };
  } else if (name == "tansq") {
    f.id = FamilyId::tansq;
    f.formula = "pi*tan(z)^2+lambda";
    f.singular_values = {
        {SingularKind::critical, "lambda", [](Complex l) { return l; },
         [](Complex, Complex z) { return Complex{kPi * std::round(z.real() / kPi), 0.0}; }},
        {SingularKind::asymptotic, "lambda-pi", [](Complex l) { return l - kPi; }},
    };
  } else if (name == "exponential") {
    f.id = FamilyId::exponential;
    f.formula = "lambda*exp(z)";
    f.is_entire = true;
    f.singular_values = {{SingularKind::asymptotic, "0", [](Complex) { return Complex{}; }}};
  } else if (name == "quadratic") {
    f.id = FamilyId::quadratic;
    f.formula = "z^2+lambda";
    f.is_entire = true;
    f.transcendental = false;
    f.singular_values = {
        {SingularKind::critical, "lambda", [](Complex l) { return l; }, [](Complex, Complex) { return Complex{}; }}};
  } else if (name == "logexp") {
    f.id = FamilyId::logexp;
    f.formula = "exp(z)/(1+lambda*exp(z))";
    f.singular_values = {
        {SingularKind::asymptotic, "0", [](Complex) { return Complex{}; }},
        {SingularKind::asymptotic, "1/lambda", [](Complex l) { return 1.0 / l; }},
    };
  } else if (name == "shiftedexp") {
    // Infinitely many critical values i*pi*(2k+1) + lambda - 1; only k = -1, 0, 1 are listed.
    f.id = FamilyId::shiftedexp;
    f.formula = "z+lambda+exp(z)";
    f.is_entire = true;
    f.finite_type = false;
    auto crit = [](Complex, Complex z) {
      const double k = std::round((z.imag() / kPi - 1.0) / 2.0);
      return Complex{0.0, kPi * (2.0 * k + 1.0)};
    };
    f.singular_values = {
        {SingularKind::critical, "lambda-1-i*pi", [](Complex l) { return l - 1.0 - Complex{0.0, kPi}; }, crit},
        {SingularKind::critical, "lambda-1+i*pi", [](Complex l) { return l - 1.0 + Complex{0.0, kPi}; }, crit},
        {SingularKind::critical, "lambda-1+3i*pi", [](Complex l) { return l - 1.0 + Complex{0.0, 3.0 * kPi}; },
         crit},
    };
  } else {
    std::string names;
    for (auto n : kFamilyNames) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw UnknownNameError("unknown family '" + std::string(name) + "'; available: " + names);
  }
  return f;
}

/// The pole closest to z within kPoleSearchRadius, if any.
inline std::optional<Complex> nearest_pole(const FamilySpec& family, Complex lambda, Complex z,
                                           double radius = kPoleSearchRadius) {
  std::optional<Complex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Complex& p : family.poles(lambda, z, radius)) {
    const double d = std::abs(p - z);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

}  // namespace merobif
