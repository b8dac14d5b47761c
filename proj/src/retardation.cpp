#include "zitterdyn/retardation.hpp"

#include <cmath>
#include <sstream>

#include "zitterdyn/errors.hpp"

namespace zitterdyn {

double delay_closed_form(double beta, double bdot, const ModelParams& p) {
  const double g = lorentz_gamma(beta);
  const double g2 = g * g;
  const double g4 = g2 * g2;
  const double chi = g4 * g2 * bdot * bdot;
  return g * p.d * std::sqrt(1.0 + chi) + g4 * p.d * beta * bdot;
}

double separation_l(double beta, double bdot, const ModelParams& p) {
  const double g = lorentz_gamma(beta);
  const double g2 = g * g;
  const double g4 = g2 * g2;
  const double g5 = g4 * g;
  const double g8 = g4 * g4;
  const double d2 = p.d * p.d;
  const double root = std::sqrt(1.0 + g4 * g2 * bdot * bdot);
  const double radicand = g2 * beta * beta * d2 + g8 * bdot * bdot * (1.0 + beta * beta) * d2 +
                          2.0 * g5 * beta * bdot * d2 * root;
  // The radicand is a perfect square, so only rounding can push it below zero.
  const double scale = g2 * beta * beta * d2 + g8 * bdot * bdot * (1.0 + beta * beta) * d2;
  if (radicand < -1e-12 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "negative separation radicand " << radicand << " at beta=" << beta << " bdot=" << bdot;
    throw NumericalFailure(FailureKind::ModelViolation, msg.str());
  }
  return std::sqrt(radicand > 0.0 ? radicand : 0.0);
}

double signed_separation(double beta, double bdot, const ModelParams& p) {
  const double g = lorentz_gamma(beta);
  const double g2 = g * g;
  return g * p.d * beta * std::sqrt(1.0 + g2 * g2 * g2 * bdot * bdot) + g2 * g2 * bdot * p.d;
}

DelayResult solve_retarded_time(const TrajectoryHistory& h, double t, const ModelParams& p,
                                const LightConeOptions& opts) {
  if (h.size() < 2 || !h.covers(t)) {
    throw NumericalFailure(FailureKind::HistoryTooShort, "history does not cover reception time");
  }
  const KinematicState now = h.at(t);
  const double c = p.c;
  const double d = p.d;
  auto defect = [&](double tr) {
    const double l = now.x - h.at(tr).x;
    return c * (t - tr) - std::sqrt(l * l + d * d);
  };

  // g(t) = -d < 0 and g grows as t_r moves into the past.
  double hi = t;
  double span = opts.r_max > 0.0 ? 2.0 * (opts.r_max + d) / c : 2.0 * d / c;
  double lo = t - span;
  for (int k = 0;; ++k) {
    if (lo < h.t_min()) {
      if (defect(h.t_min()) < 0.0) {
        throw NumericalFailure(FailureKind::HistoryTooShort,
                               "history starts after the past light cone of t=" + std::to_string(t));
      }
      lo = h.t_min();
      break;
    }
    if (defect(lo) >= 0.0) break;
    hi = lo;
    span *= 2.0;
    lo = t - span;
    if (k > 60) throw NumericalFailure(FailureKind::NoBracket, "no sign change in light-cone bracket");
  }

  const double tol = opts.tol * d;
  double tr = 0.5 * (lo + hi);
  double f_lo = defect(lo);
  if (f_lo == 0.0) tr = lo;
  bool converged = f_lo == 0.0;
  for (int it = 0; it < opts.max_iter && !converged; ++it) {
    const KinematicState s = h.at(tr);
    const double l = now.x - s.x;
    const double root = std::sqrt(l * l + d * d);
    const double f = c * (t - tr) - root;
    if (std::abs(f) <= tol) {
      converged = true;
      break;
    }
    if (f > 0.0) {
      lo = tr;
    } else {
      hi = tr;
    }
    const double df = -c + l * s.v / root;
    double next = tr - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(t))) {
      tr = next;
      converged = std::abs(defect(tr)) <= tol;
      break;
    }
    tr = next;
  }
  if (!converged) {
    throw NumericalFailure(FailureKind::NonConvergence,
                           "light-cone solve did not converge at t=" + std::to_string(t));
  }
  DelayResult out;
  out.t_r = tr;
  out.r = c * (t - tr);
  out.l = now.x - h.at(tr).x;
  out.residual = std::abs(out.r - std::sqrt(out.l * out.l + d * d));
  return out;
}

double delay_variation(double beta, const ModelParams& p, double delta_vdot, double delta_gamma) {
  const double g = lorentz_gamma(beta);
  const double g2 = g * g;
  const double tc = p.d / p.c;
  return g2 * g2 * beta * tc * tc * delta_vdot + p.d * delta_gamma;
}

}  // namespace zitterdyn
