#include "zitterdyn/energy.hpp"

#include <cmath>
#include <string>

#include "zitterdyn/errors.hpp"
#include "zitterdyn/retardation.hpp"

namespace zitterdyn {

double energy_chi(double beta, double bdot) {
  const double g2 = 1.0 / ((1.0 - beta) * (1.0 + beta));
  return g2 * g2 * g2 * bdot * bdot;
}

double self_energy_exact(double beta, double bdot, const ModelParams& p) {
  const double r = delay_closed_form(beta, bdot, p);
  const double l = signed_separation(beta, bdot, p);
  const double w = r - l * beta;
  if (!(w > 0.0)) {
    throw NumericalFailure(FailureKind::ModelViolation, "r - l beta <= 0 in self-energy");
  }
  return p.rest_energy() * p.d / w;
}

double quantum_prefactor(const ModelParams& p) {
  if (p.unit_mode == UnitMode::SI) {
    return p.hbar * p.hbar / (2.0 * p.m_e) * p.alpha * p.alpha / (8.0 * p.d * p.d);
  }
  return p.rest_energy();
}

double quantum_potential_closed(double beta, double bdot, const ModelParams& p) {
  const double g = lorentz_gamma(beta);
  const double chi = energy_chi(beta, bdot);
  // 1 - 1/sqrt(1+chi) = chi / (sqrt(1+chi) (1 + sqrt(1+chi))), free of cancellation.
  const double s = std::sqrt(1.0 + chi);
  return -quantum_prefactor(p) * g * (chi / (s * (1.0 + s)));
}

Rational series_coefficient_exact(int n) {
  if (n < 1 || n > 30) throw InvalidArgument("exact series coefficient needs 1 <= n <= 30");
  unsigned __int128 num = 1;
  unsigned __int128 den = 1;
  for (int k = 1; k <= n; ++k) {
    num *= static_cast<unsigned>(2 * k - 1);
    den *= static_cast<unsigned>(2 * k);
    unsigned __int128 a = num;
    unsigned __int128 b = den;
    while (b != 0) {
      const unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    num /= a;
    den /= a;
  }
  Rational r;
  r.num = (n % 2 == 1) ? -static_cast<long long>(num) : static_cast<long long>(num);
  r.den = static_cast<unsigned long long>(den);
  return r;
}

double series_coefficient(int n) {
  if (n < 1) throw InvalidArgument("series coefficient index must be >= 1");
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= -static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
  return c;
}

SeriesValue quantum_potential_series(double beta, double bdot, int n_terms, const ModelParams& p) {
  if (n_terms < 1) throw InvalidArgument("n_terms must be >= 1");
  const double g = lorentz_gamma(beta);
  const double chi = energy_chi(beta, bdot);
  double sum = 0.0;
  double c = 1.0;
  double power = 1.0;
  for (int n = 1; n <= n_terms; ++n) {
    c *= -static_cast<double>(2 * n - 1) / static_cast<double>(2 * n);
    power *= chi;
    sum += c * power;
  }
  return {quantum_prefactor(p) * g * sum, chi >= 1.0};
}

EnergyBreakdown energy_decomposition(double beta, double bdot, const ModelParams& p, int n_terms) {
  EnergyBreakdown out;
  out.E_exact = self_energy_exact(beta, bdot, p);
  out.E_rel = lorentz_gamma(beta) * p.rest_energy();
  out.Q_closed = quantum_potential_closed(beta, bdot, p);
  const auto series = quantum_potential_series(beta, bdot, n_terms, p);
  out.Q_series = series.value;
  out.series_divergent = series.divergent;
  out.n_terms = n_terms;
  out.identity_defect = std::abs(out.E_exact - (out.E_rel + out.Q_closed));
  return out;
}

std::vector<EnergySample> q_along_trajectory(const TrajectoryHistory& h, const ModelParams& p) {
  std::vector<EnergySample> out;
  out.reserve(h.size());
  for (const auto& s : h.samples()) {
    const double beta = beta_of(s, p);
    const double bdot = bdot_of(s, p);
    out.push_back({s.t, quantum_potential_closed(beta, bdot, p), self_energy_exact(beta, bdot, p)});
  }
  return out;
}

}  // namespace zitterdyn
