#include "zitterdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "zitterdyn/errors.hpp"
#include "zitterdyn/retardation.hpp"

namespace zitterdyn {
namespace {

// Fornberg's recursion: weights w[j][k] for the k-th derivative (k <= 2) at z from nodes x.
template <typename Real>
void fd_weights(Real z, const Real* x, int n, Real (*w)[3]) {
  for (int j = 0; j < n; ++j) w[j][0] = w[j][1] = w[j][2] = 0;
  Real c1 = 1;
  Real c4 = x[0] - z;
  w[0][0] = 1;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 2);
    Real c2 = 1;
    const Real c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const Real c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k > 0; --k) w[i][k] = c1 * (k * w[i - 1][k - 1] - c5 * w[i - 1][k]) / c2;
        w[i][0] = -c1 * c5 * w[i - 1][0] / c2;
      }
      for (int k = mn; k > 0; --k) w[j][k] = (c4 * w[j][k] - k * w[j][k - 1]) / c3;
      w[j][0] = c4 * w[j][0] / c3;
    }
    c1 = c2;
  }
}

struct Node {
  double t;
  double dx;  // deviation from the reference line
  double dv;
  double a;
};

struct Image {
  double t;
  double dx;
};

class Propagator {
 public:
  Propagator(const ModelParams& p, const PropagationOptions& o, double V) : p_(p), o_(o), V_(V) {}

  // Emission node -> reception node, in deviation coordinates.
  Image image(const Node& n) const {
    const double beta = (V_ + n.dv) / p_.c;
    if (!(std::abs(beta) <= o_.speed_guard)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "speed guard: |beta| = " << std::abs(beta) << " at t=" << n.t;
      throw NumericalFailure(FailureKind::SpeedLimit, msg.str());
    }
    const double bdot = n.a * p_.d / (p_.c * p_.c);
    const double r = delay_closed_form(beta, bdot, p_);
    const double k = (1.0 - beta) * (1.0 + beta);
    return {n.t + r / p_.c, n.dx + (r / p_.c) * n.dv + p_.d * p_.d / (p_.c * p_.c) * n.a / k};
  }

  // Residual of the equation of motion for an emission state, given the deviation at reception.
  double residual(const Node& n, double dx_receive) const {
    const double beta = (V_ + n.dv) / p_.c;
    const double bdot = n.a * p_.d / (p_.c * p_.c);
    const double r = delay_closed_form(beta, bdot, p_);
    const double k = (1.0 - beta) * (1.0 + beta);
    return p_.d * p_.d / (p_.c * p_.c) * n.a + k * ((r / p_.c) * n.dv + n.dx - dx_receive);
  }

 private:
  const ModelParams& p_;
  const PropagationOptions& o_;
  double V_;
};

TrajectoryHistory as_history(const std::vector<Node>& nodes, std::size_t count) {
  std::vector<KinematicState> s;
  s.reserve(count);
  for (std::size_t i = 0; i < count; ++i) s.push_back({nodes[i].t, nodes[i].dx, nodes[i].dv, nodes[i].a});
  return TrajectoryHistory(std::move(s));
}

struct Attempt {
  std::vector<Node> nodes;
  double first_image_time = 0.0;
  std::size_t first_image_index = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  bool hit_deviation_limit = false;
  double max_residual = 0.0;         // at nodes
  double max_interp_residual = 0.0;  // at interval midpoints, through the interpolant
};

Attempt run_once(const TrajectoryHistory& dev_seed, double t_end, double h, const ModelParams& p,
                 const PropagationOptions& o, double V) {
  const Propagator prop(p, o, V);
  const int m = o.stencil_half_width;
  const double tL = dev_seed.t_max();
  const auto K = static_cast<std::size_t>(std::floor((tL - dev_seed.t_min()) / h * (1.0 + 1e-12)));
  Attempt at;
  auto& nodes = at.nodes;
  for (std::size_t k = K + 1; k-- > 0;) {
    const double t = (k == 0) ? tL : tL - static_cast<double>(k) * h;
    const KinematicState s = dev_seed.at(std::max(t, dev_seed.t_min()));
    nodes.push_back({t, s.x, s.v, s.a});
  }

  // First node whose image lands past the seed; later seed nodes would crowd it.
  std::size_t e = 0;
  Image img{};
  for (;; ++e) {
    if (e >= nodes.size()) {
      throw NumericalFailure(FailureKind::HistoryTooShort, "seed is shorter than one delay interval");
    }
    img = prop.image(nodes[e]);
    if (img.t > nodes.back().t - 0.5 * h) break;
  }
  if (e == 0 && img.t > nodes.back().t + h) {
    throw NumericalFailure(FailureKind::HistoryTooShort, "seed is shorter than one delay interval");
  }
  while (!nodes.empty() && nodes.back().t >= img.t - 0.5 * h) nodes.pop_back();
  if (nodes.size() < static_cast<std::size_t>(2 * m + 1) || e >= nodes.size()) {
    throw NumericalFailure(FailureKind::HistoryTooShort, "seed has too few nodes for the derivative stencil");
  }
  std::size_t known = nodes.size();
  const double g2 = 1.0 / ((1.0 - V / p.c) * (1.0 + V / p.c));
  const double g4 = g2 * g2;
  if (nodes.back().t >= t_end) {
    at.first_image_time = img.t;
    at.first_image_index = nodes.size();
    return at;
  }
  at.first_image_time = img.t;
  at.first_image_index = nodes.size();

  double prev_image_t = nodes.back().t;
  std::vector<double> xs(2 * m + 1);
  double w[64][3];
  for (;; ++e) {
    if (e >= known) {
      if (e + m >= nodes.size()) {
        throw NumericalFailure(FailureKind::HistoryTooShort, "stencil half-width exceeds nodes per delay");
      }
      const double tc = nodes[e].t;
      const double scale = nodes[e].t - nodes[e - 1].t;
      for (int j = -m; j <= m; ++j) xs[j + m] = (nodes[e + j].t - tc) / scale;
      fd_weights<double>(0.0, xs.data(), 2 * m + 1, w);
      double v = 0.0;
      double acc = 0.0;
      for (int j = -m; j <= m; ++j) {
        v += w[j + m][1] * nodes[e + j].dx;
        acc += w[j + m][2] * nodes[e + j].dx;
      }
      nodes[e].dv = v / scale;
      nodes[e].a = acc / (scale * scale);
      known = e + 1;
      if (std::abs(nodes[e].dx) > o.max_deviation * p.d ||
          g4 * std::abs(nodes[e].a) * p.d / (p.c * p.c) > o.max_bdot) {
        at.hit_deviation_limit = true;
        break;
      }
      if (nodes[e].t >= t_end) break;
    }
    const Image im = prop.image(nodes[e]);
    if (e > 0 && nodes.size() > at.first_image_index) {
      const double margin = (im.t - prev_image_t) / (nodes[e].t - nodes[e - 1].t);
      at.min_margin = std::min(at.min_margin, margin);
      if (!(margin >= o.monotonicity_floor)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "advance map folds at emission time s=" << nodes[e].t << " (margin " << margin << ")";
        throw NumericalFailure(FailureKind::MonotonicityViolation, msg.str());
      }
    }
    prev_image_t = im.t;
    nodes.push_back({im.t, im.dx, 0.0, 0.0});
  }
  nodes.resize(known);

  // Residual check at nodes and midpoints whose reception lies in the propagated part.
  const TrajectoryHistory hist = as_history(nodes, nodes.size());
  const double t_last = nodes.back().t;
  const double t_first = at.first_image_time;
  auto check = [&](const Node& n, double& worst) {
    const Image im = prop.image(n);
    if (im.t < t_first || im.t > t_last) return;
    worst = std::max(worst, std::abs(prop.residual(n, hist.at(im.t).x)));
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check(nodes[i], at.max_residual);
    if (i + 1 < nodes.size()) {
      const double tm = 0.5 * (nodes[i].t + nodes[i + 1].t);
      const KinematicState s = hist.at(tm);
      check({tm, s.x, s.v, s.a}, at.max_interp_residual);
    }
  }
  return at;
}

}  // namespace

double uniform_delay(double beta, const ModelParams& p) { return lorentz_gamma(beta) * p.d / p.c; }

TrajectoryHistory uniform_history(double beta, double t0, double t1, const ModelParams& p, double step) {
  return perturbed_history(beta, t0, t1, p, step, Perturbation{});
}

Perturbation gaussian_pulse(double amplitude, double t_center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("pulse width must be positive");
  return [=](double t) {
    const double u = (t - t_center) / width;
    const double g = amplitude * std::exp(-0.5 * u * u);
    return Deviation{g, -g * u / width, g * (u * u - 1.0) / (width * width)};
  };
}

Perturbation sinusoid(double amplitude, double omega, double phase) {
  return [=](double t) {
    const double s = std::sin(omega * t + phase);
    const double c = std::cos(omega * t + phase);
    return Deviation{amplitude * s, amplitude * omega * c, -amplitude * omega * omega * s};
  };
}

Perturbation tapered(Perturbation inner, double t0, double t1) {
  if (!(t0 < t1)) throw InvalidArgument("taper needs t0 < t1");
  return [inner = std::move(inner), t0, t1](double t) {
    if (t <= t0 || t >= t1) return Deviation{};
    const double k = std::numbers::pi / (t1 - t0);
    const double s = std::sin(k * (t - t0)), c = std::cos(k * (t - t0));
    const double s4 = s * s * s * s;
    const double w = s4 * s * s;
    const double w1 = 6.0 * k * s4 * s * c;
    const double w2 = k * k * (30.0 * s4 * c * c - 6.0 * w);
    const Deviation d = inner(t);
    return Deviation{w * d.dx, w1 * d.dx + w * d.dv, w2 * d.dx + 2.0 * w1 * d.dv + w * d.da};
  };
}

Perturbation mode_mix(std::vector<ModeComponent> modes, double beta, double t_ref, const ModelParams& p) {
  const double tau = uniform_delay(beta, p);
  return [modes = std::move(modes), tau, t_ref](double t) {
    Deviation d;
    for (const auto& m : modes) {
      const cplx lam = m.mu / tau;
      const cplx z = m.coefficient * std::exp(lam * (t - t_ref));
      d.dx += z.real();
      d.dv += (lam * z).real();
      d.da += (lam * lam * z).real();
    }
    return d;
  };
}

std::vector<ModeComponent> random_modes(const RootSet& roots, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ModeComponent> out;
  double total = 0.0;
  for (const auto& r : roots.roots) {
    if (r.mu == cplx(0.0, 0.0) || r.mu.imag() < 0.0) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    ModeComponent m{r.mu, r.mu.imag() == 0.0 ? cplx(re, 0.0) : cplx(re, im)};
    total += std::abs(m.coefficient);
    out.push_back(m);
  }
  if (total > 0.0) {
    for (auto& m : out) m.coefficient *= amplitude / total;
  }
  return out;
}

TrajectoryHistory perturbed_history(double beta, double t0, double t1, const ModelParams& p, double step,
                                    const Perturbation& pert) {
  if (!(t0 < t1)) throw InvalidArgument("history needs t0 < t1");
  const double V = beta * p.c;
  lorentz_gamma(beta);
  if (!(step > 0.0)) step = uniform_delay(beta, p) / 64.0;
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step * (1.0 - 1e-12)));
  std::vector<KinematicState> s;
  s.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = (i == n) ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
    KinematicState k{t, V * t, V, 0.0};
    if (pert) {
      const Deviation d = pert(t);
      k.x += d.dx;
      k.v += d.dv;
      k.a += d.da;
    }
    s.push_back(k);
  }
  return TrajectoryHistory(std::move(s));
}

Arrival advance_map(const KinematicState& emit, const ModelParams& p) {
  const double beta = beta_of(emit, p);
  const double bdot = bdot_of(emit, p);
  const double r = delay_closed_form(beta, bdot, p);
  const double k = (1.0 - beta) * (1.0 + beta);
  return {emit.t + r / p.c, emit.x + (r / p.c) * emit.v + p.d * p.d / (p.c * p.c) * emit.a / k, r};
}

const char* to_string(PropagationStatus s) {
  switch (s) {
    case PropagationStatus::Completed: return "completed";
    case PropagationStatus::DeviationLimit: return "deviation_limit";
    case PropagationStatus::Failed: return "failed";
  }
  return "unknown";
}

PropagationReport propagate(const TrajectoryHistory& seed, double t_end, double grid_step, const ModelParams& p,
                            const PropagationOptions& o) {
  if (seed.size() < 2) throw InvalidArgument("seed needs at least two samples");
  require_subluminal(seed, p);
  if (o.stencil_half_width < 1 || o.stencil_half_width > 31) {
    throw InvalidArgument("stencil half-width must be in [1, 31]");
  }
  const double V = o.reference_velocity.value_or(seed[seed.size() - 1].v);
  const double tL = seed.t_max();
  const double xL = seed[seed.size() - 1].x;

  // Deviations below the rounding floor of the absolute coordinates carry no information.
  std::vector<KinematicState> dev;
  dev.reserve(seed.size());
  for (const auto& s : seed.samples()) {
    const double ref = xL + V * (s.t - tL);
    double dx = s.x - ref;
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(s.x) + std::abs(xL) + std::abs(V * (s.t - tL)));
    if (std::abs(dx) <= floor) dx = 0.0;
    double dv = s.v - V;
    if (std::abs(dv) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(V)) dv = 0.0;
    dev.push_back({s.t, dx, dv, s.a});
  }
  const TrajectoryHistory dev_seed(std::move(dev));

  PropagationReport rep;
  rep.reference_velocity = V;
  const double beta_ref = V / p.c;
  if (!(std::abs(beta_ref) < 1.0)) throw InvalidArgument("reference velocity must be below c");
  double h = grid_step > 0.0 ? grid_step : uniform_delay(beta_ref, p) / 64.0;
  if (std::abs(beta_ref) >= 0.95) rep.events.push_back("near-luminal reference speed");

  try {
    for (int refine = 0;; ++refine) {
      Attempt at = run_once(dev_seed, t_end, h, p, o, V);
      rep.grid_step = h;
      rep.max_eom_residual = at.max_residual;
      rep.max_interp_residual = at.max_interp_residual;
      rep.min_monotonicity_margin = at.min_margin;
      rep.first_image_time = at.first_image_time;
      if (at.max_residual <= o.tol_eom * p.d && at.max_interp_residual <= o.tol_interp * p.d) {
        std::vector<KinematicState> out;
        out.reserve(at.nodes.size());
        for (const auto& n : at.nodes) out.push_back({n.t, xL + V * (n.t - tL) + n.dx, V + n.dv, n.a});
        rep.trajectory = TrajectoryHistory(std::move(out));
        if (at.hit_deviation_limit) {
          rep.status = PropagationStatus::DeviationLimit;
          std::ostringstream msg;
          msg.precision(17);
          msg << "stopped at t=" << rep.trajectory.t_max() << ": deviation limit reached";
          rep.events.push_back(msg.str());
        }
        return rep;
      }
      if (refine >= o.max_refinements) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "equation-of-motion residual " << at.max_residual << " (nodes), " << at.max_interp_residual
            << " (midpoints) exceeds tolerance after " << refine << " refinements";
        throw NumericalFailure(FailureKind::ResidualTolerance, msg.str());
      }
      h *= 0.5;
      std::ostringstream msg;
      msg.precision(6);
      msg << "grid refined to step " << h << " (residual " << at.max_residual << ", midpoints "
          << at.max_interp_residual << ")";
      rep.events.push_back(msg.str());
    }
  } catch (const NumericalFailure& err) {
    if (o.throw_on_failure) throw;
    rep.status = PropagationStatus::Failed;
    rep.failure = std::string(to_string(err.kind())) + ": " + err.what();
    return rep;
  }
}

std::vector<LinearSample> propagate_linearized(double beta, const LinearSeed& seed, int n_segments,
                                               const ModelParams& p, int half_width) {
  const double g = lorentz_gamma(beta);
  const double tau = g * p.d / p.c;
  if (!(seed.step > 0.0)) throw InvalidArgument("linear seed step must be positive");
  const double ratio = tau / seed.step;
  const long N = std::lround(ratio);
  if (N < 2 || std::abs(ratio - static_cast<double>(N)) > 1e-9 * ratio) {
    throw InvalidArgument("linear seed step must divide the delay gamma d / c");
  }
  const std::size_t K = seed.dx.size();
  if (seed.dv.size() != K || seed.dvdot.size() != K) throw InvalidArgument("linear seed arrays differ in length");
  if (K < static_cast<std::size_t>(N)) {
    throw NumericalFailure(FailureKind::HistoryTooShort, "linear seed is shorter than one delay");
  }
  if (n_segments < 0) throw InvalidArgument("n_segments must be non-negative");
  if (half_width < 1 || half_width >= N || half_width > 31) {
    throw InvalidArgument("stencil half-width must be in [1, nodes per delay)");
  }

  // Centered stencil weights on the integer offsets -m..m, in long double.
  const int m = half_width;
  std::vector<long double> offs(2 * m + 1);
  for (int j = -m; j <= m; ++j) offs[j + m] = j;
  long double w[64][3];
  fd_weights<long double>(0.0L, offs.data(), 2 * m + 1, w);

  const long double h = seed.step;
  const long double c1 = static_cast<long double>(g) * g * g * p.d / p.c;
  const long double c2 = static_cast<long double>(g) * g * g * g * (p.d / p.c) * (p.d / p.c);
  const std::size_t total = K + static_cast<std::size_t>(n_segments) * static_cast<std::size_t>(N);
  std::vector<long double> x(total), v(total), a(total);
  std::vector<char> have(total, 0);
  for (std::size_t k = 0; k < K; ++k) {
    x[k] = seed.dx[k];
    v[k] = seed.dv[k];
    a[k] = seed.dvdot[k];
    have[k] = 1;
  }
  auto derive = [&](std::size_t k) {
    long double s1 = 0.0L;
    long double s2 = 0.0L;
    for (int j = -m; j <= m; ++j) {
      s1 += w[j + m][1] * x[k + j];
      s2 += w[j + m][2] * x[k + j];
    }
    v[k] = s1 / h;
    a[k] = s2 / (h * h);
    have[k] = 1;
  };
  for (std::size_t k = K; k < total; ++k) {
    const std::size_t e = k - static_cast<std::size_t>(N);
    if (!have[e]) derive(e);
    x[k] = x[e] + c1 * v[e] + c2 * a[e];
  }
  for (std::size_t k = K; k + m < total; ++k) {
    if (!have[k]) derive(k);
  }
  std::vector<LinearSample> out;
  for (std::size_t k = 0; k < total; ++k) {
    if (!have[k]) break;
    out.push_back({seed.t0 + static_cast<double>(k) * seed.step, static_cast<double>(x[k]),
                   static_cast<double>(v[k])});
  }
  return out;
}

LinearSeed mode_seed(double beta, const std::vector<ModeComponent>& modes, int nodes_per_delay,
                     const ModelParams& p) {
  if (nodes_per_delay < 2) throw InvalidArgument("need at least two nodes per delay");
  const double tau = uniform_delay(beta, p);
  LinearSeed s;
  s.step = tau / nodes_per_delay;
  s.t0 = -tau;
  const Perturbation f = mode_mix(modes, beta, 0.0, p);
  for (int k = 0; k <= nodes_per_delay; ++k) {
    const double t = (k == nodes_per_delay) ? 0.0 : -tau + k * s.step;
    const Deviation d = f(t);
    s.dx.push_back(d.dx);
    s.dv.push_back(d.dv);
    s.dvdot.push_back(d.da);
  }
  return s;
}

}  // namespace zitterdyn
