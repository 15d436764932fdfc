#include <array>
#include <cmath>
#include <limits>
#include <random>

#include <catch_amalgamated.hpp>

#include "merobif/sphere.hpp"

using merobif::canonicalize;
using merobif::chordal_dist;
using merobif::Complex;
using merobif::SpherePoint;
using Catch::Matchers::WithinAbs;

namespace {

// Inverse stereographic projection onto the unit sphere.
std::array<double, 3> lift(const SpherePoint& p) {
  if (p.is_infinite()) return {0.0, 0.0, 1.0};
  const Complex z = p.value();
  const double r2 = std::norm(z);
  return {2 * z.real() / (1 + r2), 2 * z.imag() / (1 + r2), (r2 - 1) / (1 + r2)};
}

double euclid(const SpherePoint& a, const SpherePoint& b) {
  const auto x = lift(a);
  const auto y = lift(b);
  return std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) + (x[2] - y[2]) * (x[2] - y[2]));
}

SpherePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 19);
  if (pick(rng) == 0) return SpherePoint::infinity();
  const double scale = std::pow(10.0, 3.0 * u(rng));
  return canonicalize(Complex{u(rng), u(rng)} * scale);
}

}  // namespace

TEST_CASE("chordal distance examples") {
  CHECK(chordal_dist(canonicalize(0.0), canonicalize(0.0)) == 0.0);
  CHECK_THAT(chordal_dist(canonicalize(0.0), SpherePoint::infinity()), WithinAbs(2.0, 1e-15));
  CHECK_THAT(chordal_dist(canonicalize(1.0), SpherePoint::infinity()), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(chordal_dist(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
}

TEST_CASE("canonicalize") {
  const SpherePoint a = canonicalize(Complex{3, 4});
  REQUIRE(a.is_finite());
  CHECK(a.value() == Complex{3, 4});
  CHECK(a.abs() == 5.0);
  CHECK(canonicalize(Complex{1e300, 0}).is_infinite());
  CHECK(canonicalize(Complex{0, -2e15}).is_infinite());
  CHECK(canonicalize(Complex{std::numeric_limits<double>::quiet_NaN(), 0}).is_infinite());
  CHECK(canonicalize(Complex{std::numeric_limits<double>::infinity(), 1}).is_infinite());
  CHECK(canonicalize(Complex{9.9e14, 0}).is_finite());
  CHECK(canonicalize(canonicalize(Complex{1, 2})) == canonicalize(Complex{1, 2}));
  CHECK(canonicalize(SpherePoint::infinity()).is_infinite());
  CHECK_THROWS_AS(SpherePoint::infinity().value(), merobif::DomainError);
}

TEST_CASE("chordal distance to infinity matches the closed form") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 200; ++k) {
    const Complex z{u(rng), u(rng)};
    CHECK_THAT(chordal_dist(canonicalize(z), SpherePoint::infinity()),
               WithinAbs(2.0 / std::sqrt(1.0 + std::norm(z)), 1e-14));
  }
}

TEST_CASE("metric axioms on 1000 random triples") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 1000; ++k) {
    const SpherePoint a = random_point(rng);
    const SpherePoint b = random_point(rng);
    const SpherePoint c = random_point(rng);
    const double ab = chordal_dist(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 2.0 + 1e-15);
    CHECK(ab == chordal_dist(b, a));
    CHECK(chordal_dist(a, a) == 0.0);
    CHECK(ab <= chordal_dist(a, c) + chordal_dist(c, b) + 1e-12);
    CHECK_THAT(ab, WithinAbs(euclid(a, b), 1e-12));
  }
}

TEST_CASE("to_string") {
  CHECK(merobif::to_string(SpherePoint::infinity()) == "inf");
  CHECK_FALSE(merobif::to_string(canonicalize(Complex{1, -2})).empty());
}
