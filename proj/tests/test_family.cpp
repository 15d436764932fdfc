#include <cmath>
#include <random>
#include <string>

#include <catch_amalgamated.hpp>

#include "merobif/family.hpp"
#include "oracles.hpp"

using namespace merobif;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {
const Complex I{0.0, 1.0};
}

TEST_CASE("get_family singular value tables") {
  const FamilySpec tan_f = get_family("tangent");
  REQUIRE(tan_f.singular_values.size() == 2);
  const Complex l{0.3, -1.2};
  CHECK(tan_f.singular_values[0].kind == SingularKind::asymptotic);
  CHECK(tan_f.singular_values[1].kind == SingularKind::asymptotic);
  CHECK(tan_f.singular_values[0].value_at(l) == l * I);
  CHECK(tan_f.singular_values[1].value_at(l) == -l * I);

  const FamilySpec sq = get_family("tansq");
  REQUIRE(sq.singular_values.size() == 2);
  CHECK(sq.singular_values[0].kind == SingularKind::critical);
  CHECK(sq.singular_values[0].value_at(l) == l);
  CHECK(sq.singular_values[1].kind == SingularKind::asymptotic);
  CHECK(sq.singular_values[1].value_at(l) == l - kPi);

  const FamilySpec ex = get_family("exponential");
  REQUIRE(ex.singular_values.size() == 1);
  CHECK(ex.singular_values[0].kind == SingularKind::asymptotic);
  CHECK(ex.singular_values[0].value_at(l) == Complex{});
  CHECK(ex.is_entire);

  CHECK(get_family("quadratic").is_entire);
  CHECK_FALSE(get_family("quadratic").transcendental);
  CHECK_FALSE(get_family("shiftedexp").finite_type);
  CHECK_FALSE(get_family("logexp").is_entire);
}

TEST_CASE("unknown family names list the alternatives") {
  CHECK_THROWS_AS(get_family("nope"), UnknownNameError);
  CHECK_THROWS_WITH(get_family("nope"), ContainsSubstring("tangent") && ContainsSubstring("shiftedexp"));
  CHECK_THROWS_AS(get_family("tangent").singular_value(2), PreconditionError);
}

TEST_CASE("eval examples") {
  const FamilySpec tan_f = get_family("tangent");
  CHECK(tan_f.eval(1.0, Complex{}).value() == Complex{});
  const Complex v = tan_f.eval(1.0, I).value();
  CHECK_THAT(v.real(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(v.imag(), WithinAbs(std::tanh(1.0), 1e-15));
  CHECK_THAT(v.imag(), WithinAbs(0.76159415595576, 1e-13));
  CHECK(get_family("tansq").eval(2.0, Complex{}).value() == Complex{2.0});
  CHECK(tan_f.eval(1.0, Complex{kPi / 2}).is_infinite());
  CHECK(get_family("tansq").eval(0.0, Complex{-kPi / 2}).is_infinite());
  CHECK_THROWS_AS(tan_f.eval(1.0, SpherePoint::infinity()), DomainError);
}

TEST_CASE("nearest_pole examples") {
  const auto p = nearest_pole(get_family("tangent"), Complex{3, 1}, 1.5);
  REQUIRE(p);
  CHECK_THAT(p->real(), WithinAbs(1.5707963267948966, 1e-15));
  CHECK_FALSE(nearest_pole(get_family("exponential"), 1.0, 0.0));
  const auto q = nearest_pole(get_family("tansq"), 0.0, -1.4);
  REQUIRE(q);
  CHECK_THAT(q->real(), WithinAbs(-kPi / 2, 1e-15));
}

TEST_CASE("deriv_z agrees with central differences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto name : kFamilyNames) {
    const FamilySpec fam = get_family(name);
    int tested = 0;
    while (tested < 100) {
      const Complex lambda{u(rng), u(rng)};
      const Complex z{u(rng), u(rng)};
      if (std::abs(lambda) < 0.05) continue;
      const auto p = nearest_pole(fam, lambda, z);
      if (p && std::abs(*p - z) < 0.2) continue;
      const double h = 1e-5;
      const Complex fd = oracle::central_difference([&](Complex w) { return fam.eval(lambda, w).value(); }, z, h);
      const Complex d = fam.deriv_z(lambda, z);
      INFO(name << " lambda=" << lambda << " z=" << z);
      CHECK(std::abs(d - fd) <= 1e-6 * std::max(std::abs(d), 1e-3));
      CHECK_THAT(fam.log_abs_deriv_z(lambda, z), WithinAbs(std::log(std::abs(d)), 1e-9));
      ++tested;
    }
  }
}

TEST_CASE("listed poles blow up and entire families have none") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto name : kFamilyNames) {
    const FamilySpec fam = get_family(name);
    for (int k = 0; k < 20; ++k) {
      const Complex lambda{u(rng), u(rng)};
      if (std::abs(lambda) < 0.05) continue;
      const auto ps = fam.poles(lambda, Complex{u(rng), u(rng)}, 10.0);
      if (fam.is_entire) {
        CHECK(ps.empty());
        continue;
      }
      CHECK_FALSE(ps.empty());
      for (const Complex& p : ps) {
        for (double s : {1e-8, -1e-8}) {
          const SpherePoint w = fam.eval(lambda, p + s);
          CHECK((w.is_infinite() || w.abs() >= 1e6));
        }
      }
    }
  }
}

TEST_CASE("tangent poles do not depend on lambda") {
  for (auto name : {"tangent", "tansq"}) {
    const FamilySpec fam = get_family(name);
    const auto a = fam.poles(0.3, 0.0, 20.0);
    const auto b = fam.poles(Complex{-4, 7}, 0.0, 20.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
    CHECK(a.size() == 12);  // (k + 1/2) pi, k = -6..5, within 20
  }
  CHECK(get_family("tangent").pole(1.0, -1).value() == Complex{-kPi / 2});
  CHECK(get_family("tangent").nearest_pole_index(1.0, Complex{-1.5, 3}).value() == -1);
  CHECK(get_family("tangent").nearest_pole_index(1.0, Complex{4.7, 0}).value() == 1);
}

TEST_CASE("logexp poles") {
  const FamilySpec fam = get_family("logexp");
  const Complex lambda{0.5, 0.25};
  for (long k = -2; k <= 2; ++k) {
    const Complex p = fam.pole(lambda, k).value();
    CHECK(std::abs(1.0 + lambda * std::exp(p)) < 1e-14);
  }
}

TEST_CASE("far from the real axis tan is evaluated without overflow") {
  const FamilySpec fam = get_family("tangent");
  const Complex up = fam.eval(1.0, Complex{0.3, 40}).value();
  CHECK(std::abs(up - I) < 1e-15);
  const Complex down = fam.eval(1.0, Complex{0.3, -400}).value();
  CHECK(std::abs(down + I) < 1e-15);
  // |sec^2 z| ~ 4 exp(-2|Im z|) for large |Im z|.
  CHECK_THAT(fam.log_abs_deriv_z(1.0, Complex{0.3, 400}), WithinAbs(std::log(4.0) - 800.0, 1e-9));
  CHECK_THAT(get_family("tansq").eval(1.0, Complex{0, 800}).value().real(), WithinAbs(1.0 - kPi, 1e-12));
}

TEST_CASE("singular values are what the formulas say") {
  const Complex l{0.7, 0.4};
  // critical points
  CHECK(std::abs(get_family("tansq").deriv_z(l, Complex{2 * kPi, 0})) < 1e-12);
  CHECK(get_family("quadratic").deriv_z(l, 0.0) == Complex{});
  const FamilySpec se = get_family("shiftedexp");
  for (const auto& sv : se.singular_values) {
    const Complex c = sv.critical_point_near(l, sv.value_at(l) - l);
    CHECK(std::abs(se.deriv_z(l, c)) < 1e-12);
    CHECK(std::abs(se.eval(l, c).value() - sv.value_at(l)) < 1e-12);
  }
  // asymptotic values along vertical / horizontal rays
  CHECK(std::abs(get_family("tangent").eval(l, Complex{0.2, 60}).value() - l * I) < 1e-12);
  CHECK(std::abs(get_family("tangent").eval(l, Complex{0.2, -60}).value() + l * I) < 1e-12);
  CHECK(std::abs(get_family("logexp").eval(l, Complex{-60, 1}).value()) < 1e-12);
  CHECK(std::abs(get_family("logexp").eval(l, Complex{60, 1}).value() - 1.0 / l) < 1e-12);
  CHECK(std::abs(get_family("exponential").eval(l, Complex{-60, 1}).value()) < 1e-12);
}

TEST_CASE("singular values move continuously with lambda") {
  for (auto name : kFamilyNames) {
    const FamilySpec fam = get_family(name);
    for (const auto& sv : fam.singular_values) {
      const Complex l{0.4, 0.9};
      CHECK(std::abs(sv.value_at(l + 1e-7) - sv.value_at(l)) < 1e-5);
    }
  }
}
