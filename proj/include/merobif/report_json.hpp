#pragma once

#include <complex>
#include <optional>
#include <string>

#include <json.hpp>

#include "merobif/cycle.hpp"
#include "merobif/locator.hpp"
#include "merobif/orbit.hpp"
#include "merobif/sphere.hpp"

namespace merobif {

inline nlohmann::json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline nlohmann::json to_json(const SpherePoint& p) {
  if (p.is_infinite()) return "inf";
  return to_json(p.value());
}

inline nlohmann::json to_json(const Cycle& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const Complex& z : c.points) pts.push_back(to_json(z));
  return {{"period", c.period},
          {"points", pts},
          {"multiplier", to_json(c.multiplier)},
          {"log_abs_multiplier", c.log_abs_multiplier},
          {"type", std::string(to_string(c.type))}};
}

inline nlohmann::json to_json(const OrbitFate& f) {
  nlohmann::json j{{"kind", std::string(fate_kind(f))}};
  if (auto* a = std::get_if<AttractedToCycle>(&f)) {
    j["period"] = a->period;
    j["multiplier"] = to_json(a->multiplier);
    j["representative"] = to_json(a->representative);
  } else if (auto* h = std::get_if<HitsPole>(&f)) {
    j["order"] = h->order;
  } else if (auto* e = std::get_if<Escapes>(&f)) {
    j["at_iter"] = e->at_iter;
  } else {
    j["max_iter"] = std::get<Undetermined>(f).max_iter;
  }
  return j;
}

inline nlohmann::json to_json(const ParamSolveReport& r) {
  nlohmann::json j{{"family", r.family},
                   {"kind", std::string(to_string(r.kind))},
                   {"lambda", to_json(r.lambda)},
                   {"residual", r.residual},
                   {"sv_index", r.sv_index}};
  if (!r.flavor.empty()) j["flavor"] = r.flavor;
  if (r.order) j["order"] = r.order;
  if (r.period) j["period"] = r.period;
  if (r.preperiod) j["preperiod"] = r.preperiod;
  if (r.kind == SolveKind::truncated || r.kind == SolveKind::shooting) j["pole_index"] = r.pole_index;
  auto opt = [&](const char* key, const std::optional<Complex>& v) {
    if (v) j[key] = to_json(*v);
  };
  opt("pole", r.pole);
  opt("critical_point", r.critical_point);
  opt("landing_multiplier", r.landing_multiplier);
  opt("target", r.target);
  opt("cycle_point", r.cycle_point);
  opt("omega", r.omega);
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [k, ok] : r.verification) v[k] = ok;
  j["verification"] = v;
  return j;
}

}  // namespace merobif
