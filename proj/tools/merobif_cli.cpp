// Command-line front end: render, locate, orbit, trace-cycle, experiment.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "merobif/merobif.hpp"

namespace {

using namespace merobif;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Documents --config; the file itself is merged into argv before parsing.
void add_config(CLI::App* sub) {
  sub->add_option("--config", "key = value file; command-line flags take precedence");
}

struct RenderArgs {
  std::string family = "tansq";
  std::string window = "-6,6,-4,4";
  std::string res = "480x320";
  int max_iter = 2000;
  std::string out;
  std::string format;
  int workers = 0;
};

int run_render(const RenderArgs& a) {
  const FamilySpec fam = get_family(a.family);
  RenderConfig cfg;
  cfg.window = cli::parse_window(a.window);
  std::tie(cfg.width, cfg.height) = cli::parse_resolution(a.res);
  cfg.orbit.max_iter = a.max_iter;
  cfg.workers = cli::capped_workers(a.workers);
  const ExportFormat fmt = cli::format_for(a.out, a.format);
  const Grid grid = render_grid(fam, cfg);
  export_grid(fam, grid, cfg, fmt, a.out);
  std::cout << "wrote " << a.out << " (" << cfg.width << "x" << cfg.height << ", " << cfg.workers
            << " workers)\n";
  for (const auto& [label, count] : grid.label_histogram()) std::cout << label << "=" << count << "\n";
  return 0;
}

struct LocateArgs {
  std::string family;
  std::string kind;
  std::size_t sv = 0;
  int order = 1;
  int period = 1;
  int preperiod = 1;
  long pole_index = 0;
  std::string seed;
  std::string z_seed = "0";
  std::string omega = "1";
  std::string target;
};

int run_locate(const LocateArgs& a) {
  const FamilySpec fam = get_family(a.family);
  const Complex seed = cli::parse_complex(a.seed);
  ParamSolveReport r;
  if (a.kind == "center") {
    r = solve_center(fam, a.sv, a.period, seed);
  } else if (a.kind == "truncated") {
    r = solve_truncated(fam, a.sv, a.order, a.pole_index, seed);
  } else if (a.kind == "misiurewicz") {
    r = solve_misiurewicz(fam, a.sv, a.preperiod, a.period, seed);
  } else if (a.kind == "parabolic") {
    const Complex omega = cli::parse_complex(a.omega);
    r = solve_parabolic_report(fam, a.period, omega / std::abs(omega), seed, cli::parse_complex(a.z_seed));
  } else if (a.kind == "shoot") {
    if (a.target.empty()) throw UsageError("--kind shoot needs --target");
    const Complex target = cli::parse_complex(a.target);
    r = shoot(fam, a.sv, a.order, [target](Complex) { return target; }, seed);
  } else {
    throw UsageError("unknown kind '" + a.kind + "' (center, truncated, misiurewicz, parabolic, shoot)");
  }
  nlohmann::json j = to_json(r);
  j["revalidated_residual"] = revalidate(fam, r);
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct OrbitArgs {
  std::string family;
  std::string lambda;
  std::string z0;
  int sv = -1;
  int max_iter = 2000;
  std::string out;
};

int run_orbit(const OrbitArgs& a) {
  const FamilySpec fam = get_family(a.family);
  const Complex lambda = cli::parse_complex(a.lambda);
  Complex z0;
  if (a.sv >= 0)
    z0 = fam.singular_value(static_cast<std::size_t>(a.sv)).value_at(lambda);
  else if (!a.z0.empty())
    z0 = cli::parse_complex(a.z0);
  else
    throw UsageError("orbit needs --z0 or --sv");
  OrbitConfig cfg;
  cfg.max_iter = a.max_iter;
  const OrbitTrace tr = iterate_orbit(fam, lambda, z0, a.max_iter, cfg);
  std::ostringstream os;
  os.precision(17);
  os << "k,re_z,im_z\n";
  for (std::size_t k = 0; k < tr.points.size(); ++k) {
    const SpherePoint& p = tr.points[k];
    if (p.is_infinite())
      os << k << ",inf,inf\n";
    else
      os << k << ',' << p.value().real() << ',' << p.value().imag() << '\n';
  }
  os << "fate," << describe(tr.fate) << '\n';
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    write_file(a.out, os.str());
    std::cout << "wrote " << a.out << "\nfate," << describe(tr.fate) << "\n";
  }
  return 0;
}

struct TraceArgs {
  std::string family;
  std::string from;
  std::string to;
  int period = 1;
  std::string z0;
  int steps = 64;
  std::string out;
};

int run_trace(const TraceArgs& a) {
  const FamilySpec fam = get_family(a.family);
  const Complex la = cli::parse_complex(a.from);
  const Complex lb = cli::parse_complex(a.to);
  if (a.steps < 1) throw UsageError("--steps must be >= 1");
  const Cycle c0 = refine_cycle(fam, la, a.period, cli::parse_complex(a.z0));
  const ParameterPath path = [la, lb](double t) { return la + t * (lb - la); };
  std::vector<double> grid;
  for (int k = 0; k <= a.steps; ++k) grid.push_back(static_cast<double>(k) / a.steps);
  const CycleBranchTrace tr = continue_cycle_along_path(fam, path, grid, c0);
  std::ostringstream os;
  os.precision(17);
  os << "t,re_lambda,im_lambda,re_z0,im_z0,abs_mu,log_abs_mu\n";
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const Cycle& c = tr.cycles[k];
    os << tr.t[k] << ',' << tr.path[k].real() << ',' << tr.path[k].imag() << ',' << c.points[0].real() << ','
       << c.points[0].imag() << ',' << std::abs(c.multiplier) << ',' << c.log_abs_multiplier << '\n';
  }
  if (a.out.empty())
    std::cout << os.str();
  else
    write_file(a.out, os.str());
  std::cout << "status=" << to_string(tr.status) << " steps=" << tr.t.size() << " period=" << c0.period;
  if (!tr.detail.empty()) std::cout << " detail=\"" << tr.detail << "\"";
  std::cout << "\n";
  return 0;
}

struct ExperimentArgs {
  std::string name;
  std::string out_dir;
  std::string json;
  int workers = 0;
  std::vector<std::string> thresholds;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentOptions opts;
  opts.out_dir = a.out_dir;
  opts.workers = cli::capped_workers(a.workers);
  for (const std::string& kv : a.thresholds) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--threshold expects name=value, got '" + kv + "'");
    opts.thresholds[kv.substr(0, eq)] = cli::parse_real(kv.substr(eq + 1), "threshold");
  }
  const ExperimentReport rep = run_experiment(a.name, opts);
  for (const auto& m : rep.measurements)
    std::cout << "  " << m.name << " = " << m.value << " (" << to_string(m.op) << " " << m.threshold << ") "
              << (m.pass ? "ok" : "FAILED") << "\n";
  for (const auto& p : rep.artifacts) std::cout << "  artifact " << p << "\n";
  if (!a.json.empty()) write_file(a.json, rep.to_json().dump(2) + "\n");
  std::cout << rep.name << ": " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.runtime_s << " s)\n";
  return rep.pass ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-plane experiments for natural families of meromorphic maps"};
  app.require_subcommand(1);
  std::string families;
  for (auto n : kFamilyNames) families += (families.empty() ? "" : ", ") + std::string(n);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Classify a parameter window and export PPM, CSV or JSON");
  add_config(render);
  render->add_option("--family", ra.family, "Family (" + families + ")");
  render->add_option("--window", ra.window, "re_min,re_max,im_min,im_max");
  render->add_option("--res", ra.res, "Resolution WxH");
  render->add_option("--max-iter", ra.max_iter, "Iterations per singular orbit");
  render->add_option("--out", ra.out, "Output path")->required();
  render->add_option("--format", ra.format, "ppm, csv or json (default: from extension)");
  render->add_option("--workers", ra.workers, "Worker threads (capped by MEROBIF_THREADS)");

  LocateArgs la;
  auto* locate = app.add_subcommand("locate", "Solve for a special parameter and print its report as JSON");
  add_config(locate);
  locate->add_option("--family", la.family, "Family (" + families + ")")->required();
  locate->add_option("--kind", la.kind, "center, truncated, misiurewicz, parabolic or shoot")->required();
  locate->add_option("--sv", la.sv, "Singular value index");
  locate->add_option("--order", la.order, "Truncation order (truncated, shoot)");
  locate->add_option("--period", la.period, "Cycle period (center, misiurewicz, parabolic)");
  locate->add_option("--preperiod", la.preperiod, "Preperiod counted from the critical point (misiurewicz)");
  locate->add_option("--pole-index", la.pole_index, "Pole index k (truncated)");
  locate->add_option("--seed", la.seed, "Parameter seed, e.g. 0+1.4i (base parameter for shoot)")->required();
  locate->add_option("--z-seed", la.z_seed, "Cycle point seed (parabolic)");
  locate->add_option("--omega", la.omega, "Target multiplier on the unit circle (parabolic)");
  locate->add_option("--target", la.target, "Constant target value (shoot)");

  OrbitArgs oa;
  auto* orbit = app.add_subcommand("orbit", "Iterate one orbit and print it as CSV with its fate");
  add_config(orbit);
  orbit->add_option("--family", oa.family, "Family (" + families + ")")->required();
  orbit->add_option("--lambda", oa.lambda, "Parameter")->required();
  orbit->add_option("--z0", oa.z0, "Starting point");
  orbit->add_option("--sv", oa.sv, "Start at this singular value instead of --z0");
  orbit->add_option("--max-iter", oa.max_iter, "Iteration budget");
  orbit->add_option("--out", oa.out, "Write the CSV here instead of stdout");

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace-cycle", "Continue a cycle along a straight parameter segment");
  add_config(trace);
  trace->add_option("--family", ta.family, "Family (" + families + ")")->required();
  trace->add_option("--from", ta.from, "Start parameter")->required();
  trace->add_option("--to", ta.to, "End parameter")->required();
  trace->add_option("--period", ta.period, "Cycle period");
  trace->add_option("--z0", ta.z0, "Seed for a cycle point at the start parameter")->required();
  trace->add_option("--steps", ta.steps, "Grid intervals");
  trace->add_option("--out", ta.out, "Write the CSV here instead of stdout");

  ExperimentArgs ea;
  std::string names;
  for (auto n : kExperimentNames) names += (names.empty() ? "" : ", ") + std::string(n);
  auto* experiment = app.add_subcommand("experiment", "Run a scripted experiment (" + names + ")");
  add_config(experiment);
  experiment->add_option("name", ea.name, "Experiment name")->required();
  experiment->add_option("--out-dir", ea.out_dir, "Directory for artifacts");
  experiment->add_option("--json", ea.json, "Write the report as JSON");
  experiment->add_option("--workers", ea.workers, "Render workers (capped by MEROBIF_THREADS)");
  experiment->add_option("--threshold", ea.thresholds, "Override a threshold, name=value");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = cli::merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*render) return run_render(ra);
    if (*locate) return run_locate(la);
    if (*orbit) return run_orbit(oa);
    if (*trace) return run_trace(ta);
    if (*experiment) return run_experiment_cmd(ea);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
