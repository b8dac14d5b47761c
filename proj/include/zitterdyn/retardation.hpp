#pragma once

#include "zitterdyn/model.hpp"
#include "zitterdyn/trajectory.hpp"

namespace zitterdyn {

struct DelayResult {
  double r = 0.0;         // retarded distance c (t - t_r)
  double t_r = 0.0;       // emission time
  double l = 0.0;         // x(t) - x(t_r)
  double residual = 0.0;  // |c (t - t_r) - sqrt(l^2 + d^2)|
};

/// Retarded distance from the emission kinematics:
/// r = gamma d sqrt(1 + gamma^6 bdot^2) + gamma^4 d beta bdot.
double delay_closed_form(double beta, double bdot, const ModelParams& params);

/// Non-negative longitudinal displacement matching delay_closed_form (r^2 - l^2 = d^2).
double separation_l(double beta, double bdot, const ModelParams& params);

/// Signed displacement x(t) - x(t_r) on the equation-of-motion shell:
/// r beta + gamma^2 bdot d. Its magnitude is separation_l.
double signed_separation(double beta, double bdot, const ModelParams& params);

struct LightConeOptions {
  double tol = 1e-12;  // in units of d
  int max_iter = 200;
  /// Upper bound on the expected delay r/c; 0 means start from d/c and expand.
  double r_max = 0.0;
};

/// Emission time on the past light cone of x(t): c (t - t_r) = sqrt((x(t) - x(t_r))^2 + d^2).
/// For |v| < c the light-cone defect is strictly monotone in t_r, so the root is unique.
DelayResult solve_retarded_time(const TrajectoryHistory& history, double t, const ModelParams& params,
                                const LightConeOptions& opts = {});

/// First-order change of r about uniform motion:
/// delta_r = gamma^4 beta (d/c)^2 delta_vdot + d delta_gamma.
double delay_variation(double beta, const ModelParams& params, double delta_vdot, double delta_gamma);

}  // namespace zitterdyn
