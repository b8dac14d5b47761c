#include "zitterdyn/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "zitterdyn/constants.hpp"
#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/energy.hpp"
#include "zitterdyn/errors.hpp"
#include "zitterdyn/retardation.hpp"
#include "zitterdyn/selfforce.hpp"
#include "zitterdyn/spectrum.hpp"

namespace zitterdyn {
namespace {

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void model_checks(std::vector<CheckResult>& out) {
  const double d = electron_scale_separation();
  const ModelParams si = make_params(d, UnitMode::SI);
  const double lhs = si.d * si.m_e * si.c;
  const double rhs = si.hbar * si.alpha / 4.0;
  out.push_back({"model", "SI mass identity d m_e c = hbar alpha / 4", rel(lhs, rhs) < 1e-15,
                 fmt("relative defect %.3e", rel(lhs, rhs))});

  double worst = 0.0;
  for (Quantity q : {Quantity::Length, Quantity::Time, Quantity::Velocity, Quantity::Acceleration, Quantity::Mass,
                     Quantity::Energy, Quantity::Frequency, Quantity::Force}) {
    for (double v : {1.0, -3.5e-7, 2.25e12}) {
      worst = std::max(worst, rel(dimensionalize(nondimensionalize(v, q, si), q, si), v));
    }
  }
  out.push_back({"model", "unit round trip", worst < 4e-16, fmt("worst relative error %.3e", worst)});

  bool mono = lorentz_gamma(0.0) == 1.0;
  double prev = 1.0;
  for (int i = 1; i < 1000; ++i) {
    const double g = lorentz_gamma(i / 1000.0);
    mono = mono && g > prev;
    prev = g;
  }
  out.push_back({"model", "lorentz_gamma monotone from 1", mono, "1000 points on [0, 1)"});

  const double t_classical = characteristic_period(codata::classical_electron_radius, codata::speed_of_light);
  const double t_half = characteristic_period(d / 2.0, codata::speed_of_light);
  out.push_back({"model", "period from classical radius", std::abs(t_classical - 1.18e-22) < 0.01 * 1.18e-22,
                 fmt("T0 = %.6e s", t_classical)});
  out.push_back({"model", "period from r_e = d/2 (reported, no target)", true,
                 fmt2("T0 = %.6e s; 2 pi d / c = %.6e s", t_half, 2.0 * codata::pi * d / codata::speed_of_light)});
}

void retardation_checks(std::vector<CheckResult>& out) {
  const ModelParams p = make_params(1.0, UnitMode::Dimensionless);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double b = 0.99 * i / 49.0;
      const double bd = j / 49.0;
      const double r = delay_closed_form(b, bd, p);
      const double l = separation_l(b, bd, p);
      worst = std::max(worst, std::abs(r * r - l * l - 1.0) / (r * r));
    }
  }
  out.push_back({"retardation", "r^2 - l^2 = d^2 on 50x50 grid", worst < 1e-12, fmt("worst relative %.3e", worst)});

  double worst_u = 0.0;
  for (double b : {0.0, 0.3, 0.5, 0.6, 0.9}) {
    const auto h = uniform_history(b, -5.0, 1.0, p);
    const auto dr = solve_retarded_time(h, 0.5, p);
    worst_u = std::max(worst_u, std::abs(dr.r - lorentz_gamma(b)));
  }
  out.push_back({"retardation", "light-cone solve on uniform motion gives gamma d", worst_u < 1e-10,
                 fmt("worst |r - gamma d| %.3e", worst_u)});

  // Central differences of the closed form in (vdot, gamma) about bdot = 0.
  double worst_fd = 0.0;
  for (double b : {0.1, 0.4, 0.6, 0.8}) {
    const double h = 1e-5;
    const double dr_dvdot = (delay_closed_form(b, h, p) - delay_closed_form(b, -h, p)) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(dr_dvdot - delay_variation(b, p, 1.0, 0.0)));
  }
  out.push_back({"retardation", "delay_variation matches finite differences", worst_fd < 1e-6,
                 fmt("worst deviation %.3e", worst_fd)});
}

void selfforce_checks(std::vector<CheckResult>& out) {
  const ModelParams p = make_params(1.0, UnitMode::Dimensionless);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ub(-0.95, 0.95), ua(-3.0, 3.0), ul(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double b = ub(rng);
    const double l = ul(rng);
    const double r = std::sqrt(l * l + 1.0);
    const double a = ua(rng);
    const double f = self_force(l, r, b, a, p);
    const double e = -p.e_charge * lw_field(l, r, b, a, p).E_x;
    worst = std::max(worst, std::abs(f - e) / std::max(std::abs(f), 1e-300));
  }
  out.push_back({"selfforce", "self_force = -e E_x on 10^4 random inputs", worst < 1e-12,
                 fmt("worst relative %.3e", worst)});

  bool damping = true;
  for (double a : {-2.0, -0.1, 0.1, 2.0}) damping = damping && self_force(0.0, 1.0, 0.0, a, p) * a < 0.0;
  out.push_back({"selfforce", "radiation reaction opposes acceleration at rest", damping, "a in {-2, -0.1, 0.1, 2}"});

  double worst_u = 0.0;
  for (int i = 0; i <= 99; ++i) {
    const double b = 0.99 * i / 99.0;
    const double r = lorentz_gamma(b);
    worst_u = std::max(worst_u, std::abs(self_force(b * r, r, b, 0.0, p)));
  }
  out.push_back({"selfforce", "no self-force on uniform motion", worst_u < 1e-15, fmt("worst |F| %.3e", worst_u)});
}

void dynamics_checks(std::vector<CheckResult>& out) {
  const ModelParams p = make_params(1.0, UnitMode::Dimensionless);
  double worst = 0.0;
  bool ok = true;
  for (double b : {0.0, 0.3, 0.6, 0.9}) {
    const double tau = uniform_delay(b, p);
    const auto seed = uniform_history(b, -2.0 * tau, 0.0, p);
    const auto rep = propagate(seed, 50.0 * tau, 0.0, p);
    ok = ok && rep.trajectory.t_max() >= 50.0 * tau;
    for (const auto& s : rep.trajectory.samples()) worst = std::max(worst, std::abs(s.x - b * s.t));
  }
  out.push_back({"dynamics", "uniform motion invariant over 50 delays", ok && worst < 1e-10,
                 fmt("worst |x - beta t| %.3e", worst)});

  const RootSet rs = find_roots(0.0, {-1.0, 10.0, -12.0, 12.0}, 40);
  const auto modes = random_modes(rs, 1e-6, 7);
  const auto seed = perturbed_history(0.0, -2.0, 0.0, p, 1.0 / 64.0, mode_mix(modes, 0.0, 0.0, p));
  PropagationOptions o;
  o.max_deviation = 1e-4;
  o.reference_velocity = 0.0;
  const auto rep = propagate(seed, 20.0, 1.0 / 64.0, p, o);
  double a0 = 0.0, a1 = 0.0;
  for (const auto& s : rep.trajectory.samples()) {
    if (s.t <= 0.0) a0 = std::max(a0, std::abs(s.x));
    a1 = std::max(a1, std::abs(s.x));
  }
  out.push_back({"dynamics", "perturbed rest grows 10x within 20 delays", a1 >= 10.0 * a0,
                 fmt2("growth %.3e by t = %.3f", a1 / a0, rep.trajectory.t_max())});
  out.push_back({"dynamics", "accepted trajectory residual below tolerance",
                 rep.max_eom_residual < 1e-8 && rep.max_interp_residual < 1e-6,
                 fmt2("nodes %.3e, midpoints %.3e", rep.max_eom_residual, rep.max_interp_residual)});

  double worst_mult = 0.0;
  for (const auto& r : rs.roots) {
    if (r.mu == cplx(0.0, 0.0) || r.mu.imag() < 0.0) continue;
    const int N = 64;
    const auto ls = mode_seed(0.0, {{r.mu, 1.0}}, N, p);
    const auto lin = propagate_linearized(0.0, ls, 1, p, 8);
    for (int k = N + 1; k <= N + 20; ++k) {
      const cplx expect = std::exp(r.mu) * std::exp(r.mu * (ls.t0 + (k - N) * ls.step));
      worst_mult = std::max(worst_mult, std::abs(lin[k].dx - expect.real()) / std::abs(expect));
    }
  }
  out.push_back({"dynamics", "one linear segment multiplies each mode by e^mu", worst_mult < 1e-6,
                 fmt("worst relative %.3e", worst_mult)});

  // Reception windows keep one delay plus margin of history behind them; the reversed
  // window sits where the reversed motion has the largest amplitude.
  const double t1 = rep.trajectory.t_max();
  const double fwd = max_lightcone_residual(rep.trajectory, rep.first_image_time, t1, p);
  const auto rev = time_reversed(rep.trajectory);
  const double bwd = max_lightcone_residual(rev, -t1 + 1.2, -t1 + 1.7, p);
  out.push_back({"dynamics", "time reversal breaks the equation of motion", fwd < 1e-8 && bwd > 1e-8,
                 fmt2("forward %.3e, reversed %.3e", fwd, bwd)});
}

void spectrum_checks(std::vector<CheckResult>& out) {
  const ModelParams p = make_params(1.0, UnitMode::Dimensionless);
  double worst_conj = 0.0;
  for (double b : {0.0, 0.45, 0.9}) {
    for (cplx z : {cplx(1.0, 2.0), cplx(-3.0, 0.5), cplx(7.0, -40.0)}) {
      worst_conj = std::max(worst_conj, std::abs(char_fn(std::conj(z), b) - std::conj(char_fn(z, b))));
    }
  }
  out.push_back({"spectrum", "f(conj mu) = conj f(mu)", worst_conj == 0.0, fmt("worst %.3e", worst_conj)});

  const RootSet rs = find_roots(0.0, Box{}, 200);
  bool pairs = true;
  for (const auto& r : rs.roots) {
    bool found = r.mu.imag() == 0.0;
    for (const auto& o : rs.roots) found = found || std::abs(o.mu - std::conj(r.mu)) < 1e-9;
    pairs = pairs && found;
  }
  out.push_back({"spectrum", "default box certified at beta = 0", rs.multiplicity_sum() == rs.certified_count,
                 fmt2("%.0f roots with multiplicity, contour count %.0f", rs.multiplicity_sum(),
                      rs.certified_count)});
  out.push_back({"spectrum", "conjugate pairs complete", pairs, ""});

  const auto lad = eigenfrequencies(rs, p);
  bool spacing = lad.eta.size() >= 5;
  double worst_sp = 0.0;
  for (std::size_t n = 2; n + 1 < lad.eta.size(); ++n) {
    const double gap = (lad.eta[n + 1] - lad.eta[n]) / (2.0 * codata::pi);
    worst_sp = std::max(worst_sp, std::abs(gap - 1.0));
  }
  spacing = spacing && worst_sp <= 0.05;
  out.push_back({"spectrum", "ladder spacing within 5% of 2 pi for n >= 3", spacing,
                 fmt("worst relative gap error %.4f", worst_sp)});

  bool empty = true;
  for (double b : {0.0, 0.3, 0.6, 0.9}) empty = empty && count_roots(b, {-10.0, -0.1, 0.1, 10.0}) == 0;
  out.push_back({"spectrum", "no roots in [-10,-0.1]x[0.1,10]i", empty, "beta in {0, 0.3, 0.6, 0.9}"});
}

void energy_checks(std::vector<CheckResult>& out) {
  const ModelParams p = make_params(1.0, UnitMode::Dimensionless);
  double worst = 0.0;
  bool sign = true;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double b = 0.99 * i / 49.0;
      const double bd = j / 49.0;
      const auto e = energy_decomposition(b, bd, p);
      worst = std::max(worst, e.identity_defect / e.E_exact);
      sign = sign && (bd == 0.0 ? e.Q_closed == 0.0 : e.Q_closed < 0.0);
    }
  }
  out.push_back({"energy", "E_exact = gamma + Q on 50x50 grid", worst < 1e-12, fmt("worst relative %.3e", worst)});
  out.push_back({"energy", "Q <= 0 with equality iff bdot = 0", sign, ""});

  const double bd = std::sqrt(0.21);
  const double q = quantum_potential_closed(0.0, bd, p);
  const double s = quantum_potential_series(0.0, bd, 40, p).value;
  out.push_back({"energy", "series reaches closed form at chi = 0.21, N = 40", std::abs(s - q) < 1e-12,
                 fmt("|series - closed| %.3e", std::abs(s - q))});
  const Rational c1 = series_coefficient_exact(1), c2 = series_coefficient_exact(2), c3 = series_coefficient_exact(3);
  const bool coeffs = c1.num == -1 && c1.den == 2 && c2.num == 3 && c2.den == 8 && c3.num == -5 && c3.den == 16;
  out.push_back({"energy", "leading coefficients -1/2, 3/8, -5/16", coeffs, ""});

  const ModelParams si = make_params(electron_scale_separation(), UnitMode::SI);
  const double pre = quantum_prefactor(si) / si.rest_energy();
  out.push_back({"energy", "SI prefactor equals m_e c^2", std::abs(pre - 1.0) < 1e-12,
                 fmt("ratio - 1 = %.3e", pre - 1.0)});
}

}  // namespace

double max_lightcone_residual(const TrajectoryHistory& tr, double t0, double t1, const ModelParams& p) {
  double worst = 0.0;
  for (const auto& s : tr.samples()) {
    if (s.t < t0 || s.t > t1) continue;
    const DelayResult dr = solve_retarded_time(tr, s.t, p);
    worst = std::max(worst, std::abs(eom_residual(tr.at(dr.t_r), s.x, dr.r, p)));
  }
  return worst;
}

std::vector<CheckResult> run_invariant_suite() {
  std::vector<CheckResult> out;
  const std::vector<std::function<void(std::vector<CheckResult>&)>> groups = {
      model_checks, retardation_checks, selfforce_checks, dynamics_checks, spectrum_checks, energy_checks};
  for (const auto& g : groups) {
    try {
      g(out);
    } catch (const std::exception& e) {
      out.push_back({"suite", "unexpected exception", false, e.what()});
    }
  }
  return out;
}

}  // namespace zitterdyn
