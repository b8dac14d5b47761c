#pragma once

#include "zitterdyn/model.hpp"

namespace zitterdyn {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Electric field of the emitting pair at the receiving charge, split into its
/// velocity (Coulomb-like) and radiation summands.
struct FieldSample {
  double E_x = 0.0;
  double E_y = 0.0;
  Vec2 velocity_part;
  Vec2 radiation_part;
};

/// Retarded field for the geometry r_vec = l x_hat + d y_hat, with the emitter moving
/// along x at beta_ret and accelerating at a_ret. The source carries charge -e shared
/// by two constituents, so the prefactor is -e/(8 pi eps0).
///
///   r u = (l - r beta, d),  (r . u) = r - l beta
///   E = q/(8 pi eps0) / (r - l beta)^3 * [ (1 - beta^2) r u + (-d^2 a, d a l) / c^2 ]
FieldSample lw_field(double l, double r, double beta_ret, double a_ret, const ModelParams& params);

/// Longitudinal self-force on the pair:
/// F_x = e^2/(8 pi eps0) ((l - r beta)(1 - beta^2) - d^2 a / c^2) / (r - l beta)^3.
double self_force(double l, double r, double beta_ret, double a_ret, const ModelParams& params);

/// (d^2/c^2) a(t_r) + (r/c)(1 - beta^2) v(t_r) + (1 - beta^2)(x(t_r) - x(t)).
/// Vanishes exactly when the self-force does.
double eom_residual(const KinematicState& emit, double x_receive, double r, const ModelParams& params);

/// e^2 / (16 pi eps0 d c^2); 1 in dimensionless mode.
double electromagnetic_mass(const ModelParams& params);

}  // namespace zitterdyn
