#include "zitterdyn/selfforce.hpp"

#include <cmath>
#include <sstream>

#include "zitterdyn/constants.hpp"
#include "zitterdyn/errors.hpp"

namespace zitterdyn {
namespace {

void check_geometry(double r, double beta, const ModelParams& p) {
  if (!(std::abs(beta) < 1.0)) {
    throw InvalidArgument("|beta_ret| must be < 1");
  }
  if (!(r >= p.d * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "retarded distance r=" << r << " is below the transverse separation d=" << p.d;
    throw InvalidArgument(msg.str());
  }
}

double retarded_denominator(double l, double r, double beta) {
  const double w = r - l * beta;
  if (!(w > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "r - l beta = " << w << " <= 0 (l=" << l << ", r=" << r << ", beta=" << beta << ")";
    throw NumericalFailure(FailureKind::ModelViolation, msg.str());
  }
  return w * w * w;
}

}  // namespace

FieldSample lw_field(double l, double r, double beta, double a, const ModelParams& p) {
  check_geometry(r, beta, p);
  const double w3 = retarded_denominator(l, r, beta);
  const double pref = -pair_coupling(p) / p.e_charge / w3;
  const double k = 1.0 - beta * beta;
  const double c2 = p.c * p.c;
  FieldSample f;
  f.velocity_part = {pref * k * (l - r * beta), pref * k * p.d};
  f.radiation_part = {-pref * p.d * p.d * a / c2, pref * p.d * a * l / c2};
  // Totals bracket first so nearly cancelling parts lose no extra digits.
  f.E_x = pref * (k * (l - r * beta) - p.d * p.d * a / c2);
  f.E_y = pref * p.d * (k + a * l / c2);
  return f;
}

double self_force(double l, double r, double beta, double a, const ModelParams& p) {
  check_geometry(r, beta, p);
  const double w3 = retarded_denominator(l, r, beta);
  const double k = 1.0 - beta * beta;
  return pair_coupling(p) * ((l - r * beta) * k - p.d * p.d * a / (p.c * p.c)) / w3;
}

double eom_residual(const KinematicState& emit, double x_receive, double r, const ModelParams& p) {
  const double beta = emit.v / p.c;
  const double k = 1.0 - beta * beta;
  return p.d * p.d / (p.c * p.c) * emit.a + (r / p.c) * k * emit.v + k * (emit.x - x_receive);
}

double electromagnetic_mass(const ModelParams& p) {
  if (p.unit_mode == UnitMode::SI) {
    return p.e_charge * p.e_charge / (16.0 * codata::pi * p.eps0 * p.d * p.c * p.c);
  }
  return 1.0;
}

}  // namespace zitterdyn
