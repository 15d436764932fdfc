// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "merobif/merobif.hpp"
#include "oracles.hpp"

using namespace merobif;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome from_report(const ExperimentReport& r) {
  Outcome o{r.pass, "runtime " + fmt(r.runtime_s) + "s"};
  for (const auto& m : r.measurements)
    if (!m.pass) o.note += "; " + m.name + "=" + fmt(m.value) + " vs " + fmt(m.threshold);
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome figure1(const std::string& out_dir) {
  ExperimentOptions opts;
  opts.out_dir = out_dir;
  opts.workers = 1;
  const ExperimentReport r = run_experiment("figure1", opts);
  Outcome o = from_report(r);

  const FamilySpec fam = get_family("tansq");
  const Figure1Overlays ov = figure1_overlays();
  int found = 0;
  for (const Complex target : {Complex{kPi / 2}, Complex{1.5 * kPi}}) {
    for (const auto& p : ov.virtual_cycle) {
      if (std::abs(p.lambda - target) >= 1e-9) continue;
      // asymptotic value lambda - pi sits on a pole: -pi/2 and pi/2
      const double expect = target.real() < kPi ? -kPi / 2 : kPi / 2;
      if (std::abs(p.lambda - kPi - expect) < 1e-9) ++found;
      break;
    }
  }
  if (found != 2) {
    o.pass = false;
    o.note += "; pi/2 or 3pi/2 missing";
  }
  if (ov.virtual_cycle.size() < 5) {
    o.pass = false;
    o.note += "; fewer than 5 virtual-cycle parameters";
  }

  RenderConfig cfg;
  cfg.workers = std::max(4, default_worker_count());
  for (const auto* list : {&ov.virtual_cycle, &ov.centers, &ov.misiurewicz})
    cfg.overlays.insert(cfg.overlays.end(), list->begin(), list->end());
  const std::string many = ppm_bytes(render_grid(fam, cfg), cfg);
  const std::string one = slurp((std::filesystem::path(out_dir) / "figure1.ppm").string());
  const bool same = !one.empty() && one == many;
  if (!same) {
    o.pass = false;
    o.note += "; PPM differs between 1 and " + std::to_string(cfg.workers) + " workers";
  } else {
    o.note += "; PPM identical for 1 and " + std::to_string(cfg.workers) + " workers";
  }
  return o;
}

Outcome certifier() {
  Outcome o{true, ""};
  const Contour c = Contour::circle(0.0, 1.0, 128);
  const bool trivial = winding_number(c, 0.0) == 1 && winding_number(c, 2.0) == 0 &&
                       winding_number(Contour::circle(0.0, 1.0, 128, 2), 0.0) == 2;
  if (!trivial) {
    o.pass = false;
    o.note = "trivial winding cases wrong";
  }
  std::mt19937_64 rng(1414);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 5);
  int certified = 0;
  int false_cert = 0;
  int wrong_count = 0;
  for (int k = 0; k < 50; ++k) {
    oracle::Poly pf(static_cast<std::size_t>(deg(rng)) + 1), pg(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& a : pf) a = {u(rng), u(rng)};
    for (auto& a : pg) a = {u(rng), u(rng)};
    const Complex center{u(rng), u(rng)};
    const double radius = 0.3 + std::abs(u(rng));
    const CertifyResult r = certify_zero([&](Complex l) { return oracle::eval(pf, l); },
                                         [&](Complex l) { return oracle::eval(pg, l); },
                                         Contour::circle(center, radius, 128));
    const auto roots = oracle::roots(oracle::sub(pf, pg));
    const auto inside =
        std::count_if(roots.begin(), roots.end(), [&](Complex z) { return std::abs(z - center) < radius; });
    if (r.outcome != CertifyOutcome::certified) continue;
    ++certified;
    if (inside == 0) ++false_cert;
    if (r.winding != inside) ++wrong_count;
  }
  o.note += (o.note.empty() ? "" : "; ") + std::to_string(certified) + "/50 certified, " +
            std::to_string(false_cert) + " false certifications";
  if (false_cert != 0 || wrong_count != 0) o.pass = false;
  return o;
}

Outcome analytic() {
  Outcome o{true, ""};
  auto expect = [&](const std::string& what, Complex got, Complex want, double tol) {
    const double err = std::abs(got - want);
    if (!(err <= tol)) {
      o.pass = false;
      o.note += (o.note.empty() ? "" : "; ") + what + " off by " + fmt(err);
    }
  };
  const FamilySpec quad = get_family("quadratic");
  const FamilySpec ex = get_family("exponential");
  {
    const ParabolicSolution s = solve_parabolic(ex, 1, 1.0, 0.3, 0.9);
    expect("exp parabolic lambda", s.lambda, 1.0 / std::exp(1.0), 1e-10);
    expect("exp parabolic z", s.cycle.points.at(0), 1.0, 1e-10);
  }
  {
    const ParabolicSolution s = solve_parabolic(quad, 1, 1.0, 0.3, 0.6);
    expect("quad 1/4", s.lambda, 0.25, 1e-10);
    expect("quad z 1/2", s.cycle.points.at(0), 0.5, 1e-10);
  }
  {
    const ParabolicSolution s = solve_parabolic(quad, 1, -1.0, -0.8, -0.4);
    expect("quad -3/4", s.lambda, -0.75, 1e-10);
    expect("quad z -1/2", s.cycle.points.at(0), -0.5, 1e-10);
  }
  // period-3 center: real root of l^3 + 2 l^2 + l + 1
  const auto cubic = oracle::roots({1.0, 1.0, 2.0, 1.0});
  Complex airplane = cubic.front();
  for (const Complex& z : cubic)
    if (std::abs(z.imag()) < std::abs(airplane.imag())) airplane = z;
  expect("center n=1", solve_center(quad, 0, 1, 0.1).lambda, 0.0, 1e-9);
  expect("center n=2", solve_center(quad, 0, 2, -0.9).lambda, -1.0, 1e-9);
  expect("center n=3", solve_center(quad, 0, 3, -1.8).lambda, airplane, 1e-9);
  expect("center n=3 literal", airplane, -1.754877666, 1e-9);
  const ParamSolveReport m = solve_misiurewicz(quad, 0, 2, 1, -1.9);
  expect("misiurewicz", m.lambda, -2.0, 1e-9);
  if (!m.landing_multiplier || std::abs(*m.landing_multiplier - 4.0) > 1e-8) {
    o.pass = false;
    o.note += "; landing multiplier not 4";
  }
  if (o.pass) o.note = "all analytic values recovered";
  return o;
}

Outcome hygiene() {
  int bad = 0;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> per(1, 4);
  const char* names[] = {"quadratic", "tangent", "tansq", "exponential", "logexp"};
  int cycles = 0;
  for (int attempts = 0; cycles < 100 && attempts < 20000; ++attempts) {
    const FamilySpec fam = get_family(names[attempts % 5]);
    const Complex lambda{1.5 * u(rng), 1.5 * u(rng)};
    const int n = per(rng);
    Cycle c;
    try {
      c = refine_cycle(fam, lambda, n, Complex{2 * u(rng), 2 * u(rng)});
    } catch (const Error&) {
      continue;
    }
    if (c.max_abs() > 20) continue;
    bool near_pole = false;
    for (const Complex& z : c.points) {
      const auto p = nearest_pole(fam, lambda, z);
      near_pole = near_pole || (p && std::abs(*p - z) < 0.05);
    }
    if (near_pole) continue;
    const Complex fd = oracle::central_difference(
        [&](Complex z) {
          for (int k = 0; k < c.period; ++k) z = fam.eval(lambda, z).value();
          return z;
        },
        c.points[0], 1e-6 * std::max(1.0, std::abs(c.points[0])));
    if (std::abs(fd - c.multiplier) > 1e-5 * std::max(1.0, std::abs(c.multiplier))) ++bad;
    ++cycles;
  }
  int bad_deriv = 0;
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  for (auto name : kFamilyNames) {
    const FamilySpec fam = get_family(name);
    for (int tested = 0; tested < 100;) {
      const Complex lambda{w(rng), w(rng)};
      const Complex z{w(rng), w(rng)};
      if (std::abs(lambda) < 0.05) continue;
      const auto p = nearest_pole(fam, lambda, z);
      if (p && std::abs(*p - z) < 0.2) continue;
      const Complex fd = oracle::central_difference([&](Complex x) { return fam.eval(lambda, x).value(); }, z, 1e-5);
      const Complex d = fam.deriv_z(lambda, z);
      if (std::abs(d - fd) > 1e-6 * std::max(std::abs(d), 1e-3)) ++bad_deriv;
      ++tested;
    }
  }
  int bad_metric = 0;
  std::uniform_int_distribution<int> pick(0, 19);
  auto point = [&] {
    if (pick(rng) == 0) return SpherePoint::infinity();
    return canonicalize(Complex{u(rng), u(rng)} * std::pow(10.0, 3.0 * u(rng)));
  };
  for (int k = 0; k < 1000; ++k) {
    const SpherePoint a = point(), b = point(), c = point();
    const double ab = chordal_dist(a, b);
    const bool ok = ab >= 0 && ab == chordal_dist(b, a) && chordal_dist(a, a) == 0.0 &&
                    ab <= chordal_dist(a, c) + chordal_dist(c, b) + 1e-12;
    bad_metric += ok ? 0 : 1;
  }
  Outcome o;
  o.pass = cycles == 100 && bad == 0 && bad_deriv == 0 && bad_metric == 0;
  o.note = std::to_string(cycles) + " cycles (" + std::to_string(bad) + " bad), deriv " + std::to_string(bad_deriv) +
           " bad, metric " + std::to_string(bad_metric) + " bad";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir =
      argc > 1 ? argv[1] : (std::filesystem::temp_directory_path() / "merobif_acceptance").string();
  std::filesystem::create_directories(out_dir);

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"tangent period-2 branch exits", [] { return from_report(run_experiment("thmB_tangent")); }},
      {"limit virtual cycle (-pi/2, inf) and activity", [] { return from_report(run_experiment("thmA_limit_vc")); }},
      {"non-persistent parabolic parameters near i pi/2",
       [] { return from_report(run_experiment("thmD_parabolic")); }},
      {"no exits for entire families over 200 paths", [] { return from_report(run_experiment("el92_no_exit")); }},
      {"truncated parameters of orders 2 and 3", [] { return from_report(run_experiment("shooting_density")); }},
      {"tansq parameter plane render", [&] { return figure1(out_dir); }},
      {"winding and certifier soundness", certifier},
      {"analytic solver values", analytic},
      {"chain rule, derivatives and chordal metric", hygiene},
  };

  int failed = 0;
  int n = 0;
  for (const auto& [desc, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << n << " " << desc << " (" << o.note << ")" << std::endl;
  }
  std::cout << (n - failed) << "/" << n << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
