#include "zitterdyn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zitterdyn/config.hpp"
#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/energy.hpp"
#include "zitterdyn/errors.hpp"
#include "zitterdyn/invariants.hpp"
#include "zitterdyn/io.hpp"
#include "zitterdyn/parallel.hpp"
#include "zitterdyn/render.hpp"
#include "zitterdyn/spectrum.hpp"

namespace zitterdyn {
namespace {

using nlohmann::json;

const std::vector<double> kDefaultSweep = {0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9};

// Settings for one subcommand: flags override the config file, which overrides defaults.
class Settings {
 public:
  Settings(std::string section, const RunConfig& cfg, const std::map<std::string, std::string>& flags)
      : section_(std::move(section)), cfg_(cfg), flags_(flags) {}

  std::string str(const std::string& key, const std::string& fallback) {
    std::string v = fallback;
    if (auto f = flags_.find(key); f != flags_.end()) {
      v = f->second;
    } else if (auto c = cfg_.get(section_, key)) {
      v = *c;
    } else if (auto m = cfg_.get("model", key)) {
      v = *m;
    }
    used_.set(key_section(key), key, v);
    return v;
  }
  double num(const std::string& key, double fallback) {
    std::ostringstream s;
    s.precision(17);
    s << fallback;
    return parse_double(str(key, s.str()), "--" + key);
  }
  long integer(const std::string& key, long fallback) {
    return parse_int(str(key, std::to_string(fallback)), "--" + key);
  }
  std::vector<double> list(const std::string& key, const std::string& fallback) {
    return parse_double_list(str(key, fallback), "--" + key);
  }
  const RunConfig& resolved() const { return used_; }

 private:
  std::string key_section(const std::string& key) const {
    return (key == "d" || key == "units") ? "model" : section_;
  }
  std::string section_;
  const RunConfig& cfg_;
  const std::map<std::string, std::string>& flags_;
  RunConfig used_;
};

ModelParams model_from(Settings& s) {
  const std::string units = s.str("units", "dimensionless");
  UnitMode mode;
  if (units == "dimensionless") {
    mode = UnitMode::Dimensionless;
  } else if (units == "si" || units == "SI") {
    mode = UnitMode::SI;
  } else {
    throw InvalidArgument("units must be 'dimensionless' or 'si'");
  }
  const double d = s.num("d", mode == UnitMode::SI ? electron_scale_separation() : 1.0);
  return make_params(d, mode);
}

Box box_from(Settings& s, const std::string& fallback) {
  const auto v = s.list("box", fallback);
  if (v.size() != 4) throw InvalidArgument("--box needs re0,re1,im0,im1");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<double> grid_from(Settings& s, const std::string& key, const std::string& fallback) {
  const auto g = s.list(key, fallback);
  if (g.size() != 3 || g[2] < 1 || g[2] != std::floor(g[2])) {
    throw InvalidArgument("--" + key + " needs start,stop,count");
  }
  const int n = static_cast<int>(g[2]);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? g[0] : g[0] + (g[1] - g[0]) * i / (n - 1));
  return out;
}

json manifest(const std::string& command, const Settings& s) {
  json cfg = json::object();
  for (const auto& [sec, kv] : s.resolved().sections()) {
    for (const auto& [k, v] : kv) cfg[sec][k] = v;
  }
  return {{"version", kVersionStamp}, {"command", command}, {"config", cfg}};
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int cmd_simulate(Settings& s) {
  const ModelParams p = model_from(s);
  const double beta = s.num("beta", 0.0);
  const std::string family = s.str("seed-family", "modes");
  const double amplitude = s.num("amplitude", 1e-6);
  const double t_end_delays = s.num("t-end", 4.0);
  const double step_frac = s.num("grid-step", 1.0 / 64.0);
  const long seed = s.integer("seed", 1);
  const double max_dev = s.num("max-deviation", 1e-4);
  const long stencil = s.integer("stencil", 6);
  const std::string out = s.str("out", "trajectory.csv");
  const std::string man = s.str("manifest", "");

  const double tau = uniform_delay(beta, p);
  const double step = step_frac * tau;
  Perturbation pert;
  if (family == "uniform") {
  } else if (family == "pulse") {
    pert = tapered(gaussian_pulse(amplitude * p.d, -0.5 * tau, tau / 6.0), -tau, 0.0);
  } else if (family == "sinusoid") {
    pert = tapered(sinusoid(amplitude * p.d, s.num("omega", 8.0) * p.c / p.d), -tau, 0.0);
  } else if (family == "modes") {
    // the exact linearization of the advance map in the co-moving frame is the beta = 0
    // equation in units of the boosted delay, so those roots give a junction-free seed
    const RootSet rs = find_roots(0.0, {-1.0, 10.0, -12.0, 12.0}, 40);
    pert = mode_mix(random_modes(rs, amplitude * p.d, static_cast<std::uint64_t>(seed)), beta, 0.0, p);
  } else {
    throw InvalidArgument("unknown seed family '" + family + "' (uniform, pulse, sinusoid, modes)");
  }
  const auto hist = perturbed_history(beta, -2.0 * tau, 0.0, p, step, pert);
  PropagationOptions o;
  o.max_deviation = max_dev;
  o.max_bdot = s.num("max-bdot", 1e-2);
  o.reference_velocity = beta * p.c;
  o.stencil_half_width = static_cast<int>(stencil);
  const auto rep = propagate(hist, t_end_delays * tau, step, p, o);
  const std::size_t rows = export_csv(trajectory_records(rep.trajectory, p), trajectory_schema(), out);

  json m = manifest("simulate", s);
  m["status"] = to_string(rep.status);
  m["rows"] = rows;
  m["t_max"] = rep.trajectory.t_max();
  m["grid_step"] = rep.grid_step;
  m["max_eom_residual"] = rep.max_eom_residual;
  m["max_interp_residual"] = rep.max_interp_residual;
  m["min_monotonicity_margin"] = std::isfinite(rep.min_monotonicity_margin) ? json(rep.min_monotonicity_margin)
                                                                            : json(nullptr);
  m["events"] = rep.events;
  if (!man.empty()) write_json(m, man);
  std::cout << "simulate: " << rows << " rows, status " << to_string(rep.status) << ", t_max "
            << fixed(rep.trajectory.t_max(), 6) << " -> " << out << "\n";
  return 0;
}

json rootset_entry(const RootSet& rs, const ModelParams& p) {
  json j = to_json(rs, p);
  const auto lad = eigenfrequencies(rs, p);
  j["ladder"] = {{"eta", lad.eta}, {"omega", lad.omega}, {"asymptotic_spacing", lad.asymptotic_spacing}};
  return j;
}

int cmd_spectrum(Settings& s) {
  const ModelParams p = model_from(s);
  const auto betas = s.list("beta", "0");
  const Box box = box_from(s, "0,12,-60,60");
  const long grid = s.integer("grid", 200);
  const std::string out = s.str("out", "roots.json");
  json result;
  if (betas.size() == 1) {
    const RootSet rs = find_roots(betas[0], box, static_cast<int>(grid));
    result = rootset_entry(rs, p);
    std::cout << "spectrum: beta " << fixed(betas[0], 4) << ", " << rs.roots.size() << " roots, certified count "
              << rs.certified_count << " -> " << out << "\n";
  } else {
    result = json::array();
    for (double b : betas) {
      const RootSet rs = find_roots(b, box, static_cast<int>(grid));
      result.push_back(rootset_entry(rs, p));
      std::cout << "spectrum: beta " << fixed(b, 4) << ", certified count " << rs.certified_count << "\n";
    }
  }
  write_json(result, out);
  return 0;
}

int cmd_energy(Settings& s) {
  const ModelParams p = model_from(s);
  const auto betas = grid_from(s, "beta-grid", "0,0.99,50");
  const auto bdots = grid_from(s, "bdot-grid", "0,1,50");
  const long n_terms = s.integer("n-terms", 40);
  if (n_terms < 1) throw InvalidArgument("--n-terms must be >= 1");
  const std::string out = s.str("out", "energy.csv");
  const auto rows = energy_records(betas, bdots, p, static_cast<int>(n_terms));
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r[6] / r[2]);
  const std::size_t n = export_csv(rows, energy_schema(static_cast<int>(n_terms)), out);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", worst);
  std::cout << "energy: " << n << " rows, worst relative identity defect " << buf << " -> " << out << "\n";
  return 0;
}

int cmd_render(Settings& s) {
  const double beta = s.num("beta", 0.0);
  const Box box = box_from(s, "-15,15,-15,15");
  const long res = s.integer("res", 800);
  const std::string roots = s.str("roots", "");
  const std::string out = s.str("out", "domain.ppm");
  DomainColorImage img = render_domain_coloring(beta, box, static_cast<int>(res));
  if (!roots.empty()) {
    const json j = read_json(roots);
    if (j.is_array()) {
      for (const auto& e : j) overlay_roots(img, rootset_from_json(e));
    } else {
      overlay_roots(img, rootset_from_json(j));
    }
  }
  write_ppm(img, out);
  std::cout << "render: " << img.width << "x" << img.height << " -> " << out << "\n";
  return 0;
}

int cmd_verify(Settings& s) {
  const std::string out = s.str("out", "");
  const auto results = run_invariant_suite();
  int failed = 0;
  json arr = json::array();
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.module << ": " << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    failed += r.pass ? 0 : 1;
    arr.push_back({{"module", r.module}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  if (!out.empty()) {
    json m = manifest("verify", s);
    m["checks"] = arr;
    write_json(m, out);
  }
  if (failed > 0) {
    std::cerr << json{{"error", "verification_failed"}, {"failed", failed}}.dump() << "\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(Settings& s) {
  const ModelParams p = model_from(s);
  std::ostringstream def;
  for (std::size_t i = 0; i < kDefaultSweep.size(); ++i) def << (i ? "," : "") << kDefaultSweep[i];
  const auto betas = s.list("betas", def.str());
  const Box box = box_from(s, "0,12,-60,60");
  const long grid = s.integer("grid", 100);
  const std::string out = s.str("out", "sweep.json");
  std::vector<json> entries(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) {
    entries[i] = rootset_entry(find_roots(betas[i], box, static_cast<int>(grid)), p);
  });
  json m = manifest("sweep", s);
  m["rootsets"] = entries;
  write_json(m, out);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    std::cout << "sweep: beta " << fixed(betas[i], 4) << ", certified count " << entries[i]["certified_count"]
              << "\n";
  }
  std::cout << "sweep: " << betas.size() << " root sets -> " << out << "\n";
  return 0;
}

void error_json(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the two-charge electrodynamic electron model", "zitterdyn"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file with [sections]");

  std::map<std::string, std::map<std::string, std::string>> flags;
  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& help) {
    const std::string key = name;
    const std::string sec = sub->get_name();
    sub->add_option_function<std::string>(
        "--" + name, [&flags, key, sec](const std::string& v) { flags[sec][key] = v; }, help);
  };
  auto model_flags = [&](CLI::App* sub) {
    flag(sub, "d", "charge separation");
    flag(sub, "units", "dimensionless | si");
    sub->add_option("--config", config_path, "config file");
  };

  auto* sim = app.add_subcommand("simulate", "propagate a seeded trajectory and export CSV");
  model_flags(sim);
  for (const char* f : {"beta", "seed-family", "amplitude", "t-end", "grid-step", "seed", "max-deviation", "max-bdot", "stencil",
                        "omega", "out", "manifest"}) {
    flag(sim, f, "");
  }
  auto* spec = app.add_subcommand("spectrum", "certified roots of the characteristic function as JSON");
  model_flags(spec);
  for (const char* f : {"beta", "box", "grid", "out"}) flag(spec, f, "");
  auto* en = app.add_subcommand("energy", "self-energy decomposition table as CSV");
  model_flags(en);
  for (const char* f : {"beta-grid", "bdot-grid", "n-terms", "out"}) flag(en, f, "");
  auto* ren = app.add_subcommand("render", "domain-coloring image as binary PPM");
  model_flags(ren);
  for (const char* f : {"beta", "box", "res", "roots", "out"}) flag(ren, f, "");
  auto* ver = app.add_subcommand("verify", "run the invariant suite");
  model_flags(ver);
  flag(ver, "out", "");
  auto* sw = app.add_subcommand("sweep", "root sets over a list of beta values");
  model_flags(sw);
  for (const char* f : {"betas", "box", "grid", "out"}) flag(sw, f, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_json("usage", e.what());
    return 1;
  }

  try {
    const RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    Settings s(name, cfg, flags[name]);
    if (name == "simulate") return cmd_simulate(s);
    if (name == "spectrum") return cmd_spectrum(s);
    if (name == "energy") return cmd_energy(s);
    if (name == "render") return cmd_render(s);
    if (name == "verify") return cmd_verify(s);
    if (name == "sweep") return cmd_sweep(s);
    error_json("usage", "unknown subcommand " + name);
    return 1;
  } catch (const InvalidArgument& e) {
    error_json("invalid_argument", e.what());
    return 1;
  } catch (const NumericalFailure& e) {
    error_json(to_string(e.kind()), e.what());
    return 2;
  } catch (const std::exception& e) {
    error_json("internal", e.what());
    return 2;
  }
}

}  // namespace zitterdyn
