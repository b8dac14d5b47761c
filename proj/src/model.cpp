#include "zitterdyn/model.hpp"

#include <cmath>
#include <string>

#include "zitterdyn/constants.hpp"
#include "zitterdyn/errors.hpp"

namespace zitterdyn {

const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::HistoryTooShort: return "history_too_short";
    case FailureKind::NoBracket: return "no_bracket";
    case FailureKind::NonConvergence: return "non_convergence";
    case FailureKind::ModelViolation: return "model_violation";
    case FailureKind::MonotonicityViolation: return "monotonicity_violation";
    case FailureKind::SpeedLimit: return "speed_limit";
    case FailureKind::ResidualTolerance: return "residual_tolerance";
    case FailureKind::CertificationMismatch: return "certification_mismatch";
    case FailureKind::ContourTooClose: return "contour_too_close";
    case FailureKind::NonIntegerWinding: return "non_integer_winding";
    case FailureKind::WindowTooShort: return "window_too_short";
  }
  return "unknown";
}

ModelParams make_params(double d, UnitMode mode) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw InvalidArgument("charge separation d must be positive, got " + std::to_string(d));
  }
  ModelParams p;
  p.d = d;
  p.unit_mode = mode;
  if (mode == UnitMode::SI) {
    p.c = codata::speed_of_light;
    p.e_charge = codata::elementary_charge;
    p.eps0 = codata::vacuum_permittivity;
    p.hbar = codata::reduced_planck;
    p.alpha = codata::fine_structure;
    p.m_e = p.hbar * p.alpha / (4.0 * d * p.c);
  } else {
    p.c = 1.0;
    p.e_charge = 1.0;
    p.m_e = 1.0;
  }
  p.tau0 = d / p.c;
  p.omega0 = p.c / d;
  return p;
}

double electron_scale_separation() {
  return codata::reduced_planck * codata::fine_structure /
         (4.0 * codata::electron_mass * codata::speed_of_light);
}

double pair_coupling(const ModelParams& p) {
  if (p.unit_mode == UnitMode::SI) {
    return p.e_charge * p.e_charge / (8.0 * codata::pi * p.eps0);
  }
  return 2.0 * p.m_e * p.c * p.c * p.d;
}

double lorentz_gamma(double beta) {
  if (!(std::abs(beta) < 1.0)) {
    throw InvalidArgument("|beta| must be < 1, got " + std::to_string(beta));
  }
  return 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
}

double characteristic_period(double radius, double c) {
  if (!(radius > 0.0) || !(c > 0.0)) {
    throw InvalidArgument("characteristic_period needs radius > 0 and c > 0");
  }
  return 4.0 * codata::pi * radius / c;
}

double natural_unit(Quantity q, const ModelParams& p) {
  switch (q) {
    case Quantity::Length: return p.d;
    case Quantity::Time: return p.d / p.c;
    case Quantity::Velocity: return p.c;
    case Quantity::Acceleration: return p.c * p.c / p.d;
    case Quantity::Mass: return p.m_e;
    case Quantity::Energy: return p.m_e * p.c * p.c;
    case Quantity::Frequency: return p.c / p.d;
    case Quantity::Force: return p.m_e * p.c * p.c / p.d;
  }
  return 1.0;
}

}  // namespace zitterdyn
