#pragma once

#include <vector>

#include "zitterdyn/model.hpp"
#include "zitterdyn/trajectory.hpp"

namespace zitterdyn {

struct EnergyBreakdown {
  double E_exact = 0.0;  // m_e c^2 d / (r - l beta)
  double E_rel = 0.0;    // gamma m_e c^2
  double Q_closed = 0.0;
  double Q_series = 0.0;
  double identity_defect = 0.0;  // |E_exact - (E_rel + Q_closed)|
  bool series_divergent = false;  // chi >= 1
  int n_terms = 0;
};

/// chi = gamma^6 bdot^2, the recurring radicand.
double energy_chi(double beta, double bdot);

/// Self-energy m_e c^2 d / (r - l beta), with r and the signed separation built from
/// (beta, bdot) taken at one instant.
double self_energy_exact(double beta, double bdot, const ModelParams& params);

/// (hbar^2 / 2 m_e)(alpha^2 / 8 d^2); equals m_e c^2 in both unit modes.
double quantum_prefactor(const ModelParams& params);

/// Q = -prefactor * gamma * (1 - 1/sqrt(1 + chi)).
double quantum_potential_closed(double beta, double bdot, const ModelParams& params);

struct SeriesValue {
  double value = 0.0;
  bool divergent = false;
};

/// Partial sum prefactor * gamma * sum_{n=1..N} c_n chi^n of the binomial series.
SeriesValue quantum_potential_series(double beta, double bdot, int n_terms, const ModelParams& params);

/// Exact rational coefficient c_n = (-1)^n (2n-1)!! / (2^n n!), n >= 1.
struct Rational {
  long long num = 0;
  unsigned long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
Rational series_coefficient_exact(int n);  // exact for n <= 30
double series_coefficient(int n);

EnergyBreakdown energy_decomposition(double beta, double bdot, const ModelParams& params, int n_terms = 40);

struct EnergySample {
  double t = 0.0;
  double Q = 0.0;
  double E_exact = 0.0;
};

/// Pointwise decomposition along the trajectory nodes using instantaneous (beta, bdot).
std::vector<EnergySample> q_along_trajectory(const TrajectoryHistory& trajectory, const ModelParams& params);

}  // namespace zitterdyn
