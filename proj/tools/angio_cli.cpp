// Command-line front end: reproduces the threshold tables and curves and runs
// simulations. Errors go to stderr as JSON; exit 2 for bad input, 3 for numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include "angio/error.hpp"
#include "angio/io.hpp"
#include "angio/simulator.hpp"
#include "angio/stability.hpp"

using namespace angio;

namespace {

struct Common {
  std::string params_file;
  std::optional<double> alpha;
  std::optional<double> mu;
  std::string out;
};

ModelSpec load_model(const Common& c) {
  ModelSpec spec;
  if (!c.params_file.empty()) {
    spec = parse_model(read_json_file(c.params_file));
  } else {
    spec.params = ModelParams::hahnfeldt();
  }
  if (c.alpha) spec.params.alpha = *c.alpha;
  if (c.mu) spec.params.mu = *c.mu;
  spec.params.validate();
  return spec;
}

DelayKernel load_kernel(const std::string& text) {
  if (text.empty()) fail(ErrorKind::ConfigError, "kernel specification required");
  if (text.front() == '@') return parse_kernel(read_json_file(text.substr(1)));
  try {
    return parse_kernel(json::parse(text));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("bad kernel JSON: ") + e.what());
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, "grid must be start:stop:step, got \"" + text + "\"");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    fail(ErrorKind::ConfigError, "grid must be start:stop:step with step > 0 and stop >= start");
  }
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long k = 0; k <= n; ++k) grid.push_back(parts[0] + static_cast<double>(k) * parts[2]);
  return grid;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(item == "b" ? NAN : std::stod(item));
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, "bad list entry \"" + item + "\"");
    }
  }
  if (v.empty()) fail(ErrorKind::ConfigError, "empty list");
  return v;
}

// Either the requested file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fail(ErrorKind::ConfigError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

double tau_of(const CriticalA& c, int m) {
  return c.always_stable ? INFINITY : m / c.value;
}

const ErlangKernel& require_erlang(const DelayKernel& k) {
  const ErlangKernel* e = k.as_erlang();
  if (!e) fail(ErrorKind::Unsupported, "this command needs Erlang kernels");
  return *e;
}

void cmd_steady(const Common& c) {
  const ModelSpec spec = load_model(c);
  const SteadyState s = steady_state(spec.params);
  const DerivedRates d = derived_rates(spec.params);
  Output out(c.out);
  out.stream() << json{{"p_e", s.p_e}, {"q_e", s.q_e}, {"beta", d.beta}, {"gamma", d.gamma}}.dump(2)
               << '\n';
}

void cmd_critical_a(const Common& c, int m1, int m2, bool scan) {
  const ModelSpec spec = load_model(c);
  const CriticalA a = scan ? critical_a_scan(spec.params, m1, m2) : critical_a_nonshifted(spec.params, m1, m2);
  json j{{"m1", m1}, {"m2", m2}, {"always_stable", a.always_stable}, {"a_cr", a.value}};
  j["tau_cr"] = m1 == m2 ? json(format_number(tau_of(a, m1))) : json(nullptr);
  Output out(c.out);
  out.stream() << j.dump(2) << '\n';
}

void cmd_critical_sigma(const Common& c, const std::string& k1s, const std::string& k2s) {
  const ModelSpec spec = load_model(c);
  const ErlangKernel e1 = require_erlang(load_kernel(k1s));
  const ErlangKernel e2 = require_erlang(load_kernel(k2s));
  if (e1.a != e2.a || e1.sigma != e2.sigma) {
    fail(ErrorKind::Unsupported, "critical-sigma needs a shared rate a and a shared shift sigma");
  }
  const CriticalSigma cs = critical_sigma_erlang(spec.params, e1.m, e2.m, e1.a);
  json cands = json::array();
  for (const auto& k : cs.candidates) {
    cands.push_back({{"omega0", k.omega0}, {"slope", k.slope}, {"multiple", k.multiple}, {"sigma", k.sigma}});
  }
  json j{{"status", std::string(to_string(cs.status))},
         {"aux_case", std::string(to_string(cs.aux_case))},
         {"multiple_root", cs.multiple_root},
         {"candidates", cands}};
  if (cs.status == SigmaStatus::Switch) {
    j["sigma0"] = cs.sigma0;
    j["omega0"] = cs.omega0;
    j["tau_cr_sigma"] = std::max(e1.m, e2.m) / e1.a + cs.sigma0;
    StabilityReport report;
    const int count = mikhailov_count_erlang(spec.params, e1.m, e2.m, e1.a, e1.sigma);
    report.rhp_root_count = count;
    report.verdict = count == 0 ? Verdict::Stable : Verdict::Unstable;
    report.critical_value = CriticalValue{"sigma_cr", cs.sigma0};
    report.omega0 = cs.omega0;
    report.transversal = hopf_transversality(aux_F_erlang(spec.params, e1.m, e2.m, e1.a), cs.omega0);
    j["report_at_kernel_sigma"] = to_json(report);
  }
  Output out(c.out);
  out.stream() << j.dump(2) << '\n';
}

void cmd_switch_curve(const Common& c, const std::string& grid_text) {
  const ModelSpec spec = load_model(c);
  std::vector<double> grid;
  if (grid_text.empty()) {
    const SwitchEndpoints ends = tent_switch_endpoints(spec.params);
    const double top = ends.neutral_end.epsilon;
    for (int k = 1; k <= 50; ++k) grid.push_back(top * k / 50.0);
  } else {
    grid = parse_grid(grid_text);
  }
  const SwitchCurve curve = tent_switch_curve(spec.params, grid);
  Output out(c.out);
  CsvWriter csv(out.stream(), {"epsilon", "sigma_cr", "omega0"});
  for (const auto& s : curve.samples) csv.row(std::vector<double>{s.epsilon, s.sigma_cr, s.omega0});
}

void cmd_hodograph(const Common& c, const std::string& k1s, const std::string& k2s,
                   const std::string& grid_text) {
  const ModelSpec spec = load_model(c);
  const CharFunction cf(spec.params, load_kernel(k1s), load_kernel(k2s));
  const std::vector<double> grid = grid_text.empty() ? parse_grid("0:20:0.01") : parse_grid(grid_text);
  Output out(c.out);
  CsvWriter csv(out.stream(), {"omega", "re_W", "im_W"});
  for (double w : grid) {
    const cdouble v = cf(cdouble(0.0, w));
    csv.row(std::vector<double>{w, v.real(), v.imag()});
  }
  const int count = mikhailov_count(cf);
  const json summary{{"rhp_root_count", count}, {"arg_change", std::numbers::pi * (1.0 - count)}};
  (c.out.empty() ? std::cerr : std::cout) << summary.dump() << '\n';
}

struct SimOptions {
  std::string k1, k2;
  double dt = 0.0;
  double T = 100.0;
  double x0 = 0.1, y0 = 0.1;
  double window = 0.0;
  int quad_order = 8;
  bool chain = false;
};

void cmd_simulate(const Common& c, const SimOptions& o) {
  const ModelSpec spec = load_model(c);
  const GrowthFunction h = GrowthFunction::from_label(spec.growth);
  const DelayKernel k1 = load_kernel(o.k1);
  const DelayKernel k2 = load_kernel(o.k2);
  SimConfig cfg;
  cfg.T = o.T;
  cfg.quad_order = o.quad_order;
  cfg.dt = o.dt > 0.0 ? o.dt : std::min(0.01, max_resolved_dt(k1, k2));
  const History init = History::constant(o.x0, o.y0);
  Trajectory traj;
  if (o.chain) {
    const ErlangKernel& e1 = require_erlang(k1);
    const ErlangKernel& e2 = require_erlang(k2);
    if (e1.sigma != 0.0 || e2.sigma != 0.0 || e1.a != e2.a) {
      fail(ErrorKind::Unsupported, "linear chain needs non-shifted Erlang kernels with a shared rate");
    }
    traj = simulate_linear_chain(spec.params, h, e1.m, e2.m, e1.a, init, cfg);
  } else {
    traj = simulate(spec.params, h, k1, k2, init, cfg);
  }
  const double window = o.window > 0.0 ? o.window : cfg.T / 5.0;
  const Classification cls = classify_trajectory(traj, window);

  Output out(c.out);
  CsvWriter csv(out.stream(), {"t", "x", "y", "p", "q"});
  const bool have_steady = spec.params.has_positive_steady_state();
  const SteadyState ss = have_steady ? steady_state(spec.params) : SteadyState{NAN, NAN};
  for (const auto& s : traj.samples) {
    csv.row(std::vector<double>{s.t, s.x, s.y, ss.p_e * std::exp(s.x), ss.q_e * std::exp(s.x - s.y)});
  }
  json meta{{"params", to_json(spec)},      {"kernel1", to_json(k1)},
            {"kernel2", to_json(k2)},       {"config", to_json(cfg)},
            {"initial", {{"x0", o.x0}, {"y0", o.y0}}},
            {"method", o.chain ? "linear-chain" : "quadrature"},
            {"window", window},             {"classification", to_json(cls)}};
  meta["blowup_time"] = traj.blowup_time ? json(*traj.blowup_time) : json(nullptr);
  if (c.out.empty()) {
    std::cerr << meta.dump() << '\n';
  } else {
    std::ofstream side(c.out + ".json");
    side << meta.dump(2) << '\n';
  }
}

void cmd_table1(const Common& c, const std::string& alphas, const std::string& mus, const std::string& ms) {
  ModelSpec spec = load_model(c);
  Output out(c.out);
  CsvWriter csv(out.stream(), {"alpha", "mu", "m", "a_cr", "tau_cr"});
  for (double alpha : parse_list(alphas)) {
    for (double m : parse_list(ms)) {
      for (double mu : parse_list(mus)) {
        ModelParams p = spec.params;
        p.alpha = alpha;
        p.mu = std::isnan(mu) ? p.b : mu;
        const int mi = static_cast<int>(m);
        const CriticalA a = critical_a_nonshifted(p, mi, mi);
        csv.row(std::vector<std::string>{format_number(alpha), format_number(p.mu), std::to_string(mi),
                                         format_number(a.value), format_number(tau_of(a, mi))});
      }
    }
  }
}

std::vector<double> mu_grid(const ModelParams& p, const std::string& grid_text) {
  if (!grid_text.empty()) return parse_grid(grid_text);
  std::vector<double> g;
  for (int k = 0; k < 100; ++k) g.push_back(p.b * k / 100.0);
  return g;
}

void cmd_fig_zalodmu(const Common& c, const std::string& grid_text) {
  const ModelSpec spec = load_model(c);
  Output out(c.out);
  CsvWriter csv(out.stream(), {"alpha", "m", "mu", "tau_cr"});
  for (double alpha : {1.0, 0.0}) {
    for (int m = 1; m <= 3; ++m) {
      for (double mu : mu_grid(spec.params, grid_text)) {
        ModelParams p = spec.params;
        p.alpha = alpha;
        p.mu = mu;
        csv.row(std::vector<double>{alpha, static_cast<double>(m), mu,
                                    tau_of(critical_a_nonshifted(p, m, m), m)});
      }
    }
  }
}

void cmd_fig_akr(const Common& c, const std::string& grid_text) {
  const ModelSpec spec = load_model(c);
  Output out(c.out);
  CsvWriter csv(out.stream(), {"alpha", "m1", "m2", "mu", "a_cr", "always_stable"});
  const std::pair<int, int> cases[] = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 1}};
  for (double alpha : {1.0, 0.0}) {
    for (const auto& [m1, m2] : cases) {
      for (double mu : mu_grid(spec.params, grid_text)) {
        ModelParams p = spec.params;
        p.alpha = alpha;
        p.mu = mu;
        const CriticalA a = critical_a_nonshifted(p, m1, m2);
        csv.row(std::vector<double>{alpha, static_cast<double>(m1), static_cast<double>(m2), mu, a.value,
                                    a.always_stable ? 1.0 : 0.0});
      }
    }
  }
}

void cmd_fig_zabek(const Common& c, const std::string& mus, int points) {
  const ModelSpec spec = load_model(c);
  Output out(c.out);
  CsvWriter csv(out.stream(), {"alpha", "mu", "epsilon", "sigma_cr", "omega0", "sigma_stable_below",
                               "instab_lo", "instab_hi"});
  for (double alpha : {1.0, 0.0}) {
    for (double mu_in : parse_list(mus)) {
      ModelParams p = spec.params;
      p.alpha = alpha;
      p.mu = std::isnan(mu_in) ? p.b : mu_in;
      const SwitchEndpoints ends = tent_switch_endpoints(p);
      std::vector<double> grid;
      for (int k = 1; k <= points; ++k) grid.push_back(ends.neutral_end.epsilon * k / points);
      const SwitchCurve curve = tent_switch_curve(p, grid);
      std::string below, lo, hi;
      if (p.has_positive_steady_state()) {
        const TentBounds tb = tent_sufficient_bounds(p);
        below = format_number(tb.sigma_stable_below);
        if (tb.instability) {
          lo = format_number(tb.instability->first);
          hi = format_number(tb.instability->second);
        }
      }
      for (const auto& s : curve.samples) {
        csv.row(std::vector<std::string>{format_number(alpha), format_number(p.mu), format_number(s.epsilon),
                                         format_number(s.sigma_cr), format_number(s.omega0), below, lo, hi});
      }
    }
  }
}

int report_error(ErrorKind kind, const std::string& message) {
  std::cerr << json{{"error", std::string(to_string(kind))}, {"message", message}}.dump() << '\n';
  return is_usage_error(kind) ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis and simulation of a delayed angiogenesis model"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--params", common.params_file, "JSON parameter file (default: Hahnfeldt set)");
    sub->add_option("--alpha", common.alpha, "override alpha");
    sub->add_option("--mu", common.mu, "override mu");
    sub->add_option("--out", common.out, "output path (default: stdout)");
  };

  auto* steady = app.add_subcommand("steady", "steady state and derived rates");
  add_common(steady);

  int m1 = 1, m2 = 1;
  bool scan = false;
  auto* crit_a = app.add_subcommand("critical-a", "threshold in a for non-shifted Erlang kernels");
  add_common(crit_a);
  crit_a->add_option("--m1", m1)->check(CLI::PositiveNumber);
  crit_a->add_option("--m2", m2)->check(CLI::PositiveNumber);
  crit_a->add_flag("--scan", scan, "bisect the Routh-Hurwitz verdict instead of the closed form");

  std::string k1, k2, grid;
  auto* crit_s = app.add_subcommand("critical-sigma", "first crossing shift for shifted Erlang kernels");
  add_common(crit_s);
  crit_s->add_option("--kernel1", k1)->required();
  crit_s->add_option("--kernel2", k2)->required();

  auto* sw = app.add_subcommand("switch-curve", "sigma_cr(epsilon) for two equal tent kernels");
  add_common(sw);
  sw->add_option("--grid", grid, "epsilon grid start:stop:step");

  auto* hodo = app.add_subcommand("hodograph", "W(i omega) samples and right half-plane count");
  add_common(hodo);
  hodo->add_option("--kernel1", k1)->required();
  hodo->add_option("--kernel2", k2)->required();
  hodo->add_option("--grid", grid, "omega grid start:stop:step");

  SimOptions sim;
  auto* simc = app.add_subcommand("simulate", "integrate the nonlinear system");
  add_common(simc);
  simc->add_option("--kernel1", sim.k1)->required();
  simc->add_option("--kernel2", sim.k2)->required();
  simc->add_option("--dt", sim.dt, "step (default: min(0.01, resolution limit))");
  simc->add_option("--T", sim.T, "horizon");
  simc->add_option("--x0", sim.x0);
  simc->add_option("--y0", sim.y0);
  simc->add_option("--window", sim.window, "classification window (default T/5)");
  simc->add_option("--quad-order", sim.quad_order);
  simc->add_flag("--chain", sim.chain, "use the linear chain ODE (non-shifted Erlang only)");

  std::string alphas = "1,0", mus = "0,2,4,b", ms = "1,2,3";
  auto* t1 = app.add_subcommand("table1", "critical average delay for equal Erlang shapes");
  add_common(t1);
  t1->add_option("--alphas", alphas, "comma list");
  t1->add_option("--mus", mus, "comma list; 'b' means mu = b");
  t1->add_option("--ms", ms, "comma list");

  auto* fz = app.add_subcommand("fig-zalodmu", "tau_cr(mu) curves for equal shapes");
  add_common(fz);
  fz->add_option("--grid", grid, "mu grid start:stop:step");

  auto* fa = app.add_subcommand("fig-akr", "a_cr(mu) curves for all supported shape pairs");
  add_common(fa);
  fa->add_option("--grid", grid, "mu grid start:stop:step");

  std::string zmus = "0,3,5.7,b";
  int points = 50;
  auto* fzb = app.add_subcommand("fig-zabek", "tent switch curves with the sufficient bounds");
  add_common(fzb);
  fzb->add_option("--mus", zmus, "comma list; 'b' means mu = b");
  fzb->add_option("--points", points)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorKind::ConfigError, e.what());
  }

  try {
    if (*steady) cmd_steady(common);
    else if (*crit_a) cmd_critical_a(common, m1, m2, scan);
    else if (*crit_s) cmd_critical_sigma(common, k1, k2);
    else if (*sw) cmd_switch_curve(common, grid);
    else if (*hodo) cmd_hodograph(common, k1, k2, grid);
    else if (*simc) cmd_simulate(common, sim);
    else if (*t1) cmd_table1(common, alphas, mus, ms);
    else if (*fz) cmd_fig_zalodmu(common, grid);
    else if (*fa) cmd_fig_akr(common, grid);
    else if (*fzb) cmd_fig_zabek(common, zmus, points);
  } catch (const AnalysisError& e) {
    return report_error(e.kind(), e.what());
  } catch (const json::exception& e) {
    return report_error(ErrorKind::ConfigError, e.what());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
