#pragma once

// Physical parameters of the two-charge electron model and the unit bookkeeping
// shared by every other module. Internally everything is expressed through
// d, c and m_e; SI mode only adds the constants needed to present results.

namespace zitterdyn {

enum class UnitMode { Dimensionless, SI };

struct ModelParams {
  double d = 1.0;         // charge separation (length)
  double c = 1.0;         // speed of light (length/time)
  double e_charge = 1.0;  // total charge magnitude
  double eps0 = 0.0;      // vacuum permittivity, SI only
  double hbar = 0.0;      // SI only
  double alpha = 0.0;     // SI only
  double m_e = 1.0;       // electromagnetic mass
  double tau0 = 1.0;      // light-crossing time d/c
  double omega0 = 1.0;    // c/d
  UnitMode unit_mode = UnitMode::Dimensionless;

  /// Rest energy m_e c^2 (the energy unit).
  double rest_energy() const { return m_e * c * c; }
};

/// Builds a parameter set. In SI mode m_e = hbar*alpha/(4 d c); in dimensionless
/// mode c = m_e = 1 and d is kept as given.
ModelParams make_params(double d, UnitMode mode);

/// Separation d for which the electromagnetic mass equals the measured electron mass.
double electron_scale_separation();

/// e^2/(8 pi eps0), the coupling in front of the self-force. Equals 2 m_e c^2 d.
double pair_coupling(const ModelParams& params);

double lorentz_gamma(double beta);

/// Period 4 pi R / c of the self-oscillation estimate for a body of radius R.
double characteristic_period(double radius, double c);

struct KinematicState {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
};

inline double beta_of(const KinematicState& s, const ModelParams& p) { return s.v / p.c; }
/// Dimensionless acceleration a d / c^2.
inline double bdot_of(const KinematicState& s, const ModelParams& p) { return s.a * p.d / (p.c * p.c); }

enum class Quantity { Length, Time, Velocity, Acceleration, Mass, Energy, Frequency, Force };

/// Unit of `q` in the model's natural scale (d, d/c, c, c^2/d, m_e, m_e c^2, c/d, m_e c^2/d).
double natural_unit(Quantity q, const ModelParams& params);
inline double nondimensionalize(double value, Quantity q, const ModelParams& p) { return value / natural_unit(q, p); }
inline double dimensionalize(double value, Quantity q, const ModelParams& p) { return value * natural_unit(q, p); }

}  // namespace zitterdyn
