#pragma once

// Reference computations for the tests. Nothing here calls into merobif.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using C = std::complex<double>;

/// Coefficients are stored lowest degree first.
using Poly = std::vector<C>;

inline C eval(const Poly& p, C z) {
  C acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Poly trim(Poly p) {
  while (p.size() > 1 && std::abs(p.back()) == 0.0) p.pop_back();
  return p;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Poly add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

inline Poly sub(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return trim(a);
}

/// f_lambda^n(0) for z^2 + lambda as a polynomial in lambda.
inline Poly quadratic_critical_orbit(int n) {
  Poly p{0.0};
  for (int k = 0; k < n; ++k) p = add(mul(p, p), Poly{0.0, 1.0});
  return trim(p);
}

/// All roots by Durand-Kerner (Weierstrass) iteration.
inline std::vector<C> roots(Poly p) {
  p = trim(p);
  const std::size_t n = p.size() - 1;
  if (n == 0) return {};
  const C lead = p.back();
  for (auto& c : p) c /= lead;
  double bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(p[i]));
  bound += 1.0;
  std::vector<C> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::polar(bound, 2 * std::numbers::pi * i / n + 0.4);
  for (int it = 0; it < 5000; ++it) {
    double move = 0;
    for (std::size_t i = 0; i < n; ++i) {
      C den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const C dz = eval(p, z[i]) / den;
      z[i] -= dz;
      move = std::max(move, std::abs(dz));
    }
    if (move < 1e-15) break;
  }
  // Newton polish on the original polynomial.
  Poly d(n);
  for (std::size_t i = 1; i <= n; ++i) d[i - 1] = p[i] * static_cast<double>(i);
  for (auto& r : z)
    for (int it = 0; it < 3; ++it) {
      const C dv = eval(d, r);
      if (std::abs(dv) > 0) r -= eval(p, r) / dv;
    }
  return z;
}

inline C central_difference(const std::function<C(C)>& f, C z, double h = 1e-6) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

}  // namespace oracle
