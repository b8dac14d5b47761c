#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zitterdyn/model.hpp"
#include "zitterdyn/spectrum.hpp"
#include "zitterdyn/trajectory.hpp"

namespace zitterdyn {

/// Delay gamma d / c of uniform motion at beta.
double uniform_delay(double beta, const ModelParams& params);

/// x = beta c t, v = beta c, a = 0 on an even grid covering [t0, t1].
/// step <= 0 selects delay/64; the step is shrunk so the grid ends exactly at t1.
TrajectoryHistory uniform_history(double beta, double t0, double t1, const ModelParams& params, double step = 0.0);

struct Deviation {
  double dx = 0.0;
  double dv = 0.0;
  double da = 0.0;
};
using Perturbation = std::function<Deviation(double t)>;

Perturbation gaussian_pulse(double amplitude, double t_center, double width);
Perturbation sinusoid(double amplitude, double omega, double phase = 0.0);
/// Multiplies `inner` by sin^6 of the phase across (t0, t1) and zeroes it outside, so a
/// seed that is not itself a solution still joins its own image without a kink.
Perturbation tapered(Perturbation inner, double t0, double t1);

struct ModeComponent {
  cplx mu;           // characteristic root, delay units
  cplx coefficient;  // complex amplitude; the perturbation is the real part
};

/// Re sum_k c_k exp(mu_k (t - t_ref) / delay) with its first two time derivatives.
Perturbation mode_mix(std::vector<ModeComponent> modes, double beta, double t_ref, const ModelParams& params);

/// One component per root with Im mu >= 0 (mu = 0 excluded), normally distributed
/// coefficients scaled so that sum |c_k| = amplitude. Deterministic in `seed`.
std::vector<ModeComponent> random_modes(const RootSet& roots, double amplitude, std::uint64_t seed);

/// Uniform motion at beta plus the perturbation, sampled like uniform_history.
TrajectoryHistory perturbed_history(double beta, double t0, double t1, const ModelParams& params, double step,
                                    const Perturbation& perturbation);

struct Arrival {
  double t = 0.0;
  double x = 0.0;
  double r = 0.0;
};

/// Reception event pinned by an emission state:
/// r = delay_closed_form(beta, bdot), t + r/c, x + (r/c) v + (d^2/c^2) a / (1 - beta^2).
Arrival advance_map(const KinematicState& emit, const ModelParams& params);

struct PropagationOptions {
  double tol_eom = 1e-8;  // residual tolerance at nodes, in units of d
  /// Residual tolerance at interval midpoints, where the state comes from the
  /// interpolant and finite-difference derivatives rather than from the map itself.
  double tol_interp = 1e-6;
  double monotonicity_floor = 1e-6;
  double speed_guard = 0.999;
  int stencil_half_width = 6;
  int max_refinements = 2;
  /// Stop (without failing) once |x - reference line| exceeds this many d.
  double max_deviation = std::numeric_limits<double>::infinity();
  /// Same graceful stop once gamma^4 |a| d / c^2 exceeds this, gamma taken from the reference
  /// velocity. High-frequency seeds turn nonlinear through the acceleration long before the
  /// position deviation is large.
  double max_bdot = std::numeric_limits<double>::infinity();
  /// Velocity of the reference line; defaults to the seed's final velocity.
  std::optional<double> reference_velocity;
  /// When false, failures are reported through the status instead of thrown.
  bool throw_on_failure = true;
};

enum class PropagationStatus { Completed, DeviationLimit, Failed };
const char* to_string(PropagationStatus status);

struct PropagationReport {
  TrajectoryHistory trajectory;
  double max_eom_residual = 0.0;     // nodes
  double max_interp_residual = 0.0;  // interval midpoints
  double min_monotonicity_margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> events;
  PropagationStatus status = PropagationStatus::Completed;
  std::string failure;
  double grid_step = 0.0;
  double reference_velocity = 0.0;
  /// Time of the first node produced by the advance map (end of the seed part).
  double first_image_time = 0.0;
};

/// Method of steps on the reception image. Each node is mapped forward with
/// advance_map and the image becomes a new node; velocity and acceleration at new
/// nodes come from centered finite-difference stencils on the (non-uniform) nodes.
/// Positions are carried as deviations from a straight reference line so uniform
/// motion is reproduced exactly. The equation-of-motion residual is checked at every
/// node (tol_eom) and at interval midpoints through the interpolant (tol_interp); on
/// failure the grid is halved up to max_refinements times.
PropagationReport propagate(const TrajectoryHistory& seed, double t_end, double grid_step, const ModelParams& params,
                            const PropagationOptions& opts = {});

/// Perturbation of uniform motion sampled on an even grid with `step` = delay / N.
struct LinearSeed {
  double t0 = 0.0;
  double step = 0.0;
  std::vector<double> dx;
  std::vector<double> dv;
  std::vector<double> dvdot;
};

struct LinearSample {
  double t = 0.0;
  double dx = 0.0;
  double dv = 0.0;
};

/// Variational map with constant delay tau = gamma d / c:
/// dx(t + tau) = dx(t) + gamma^3 (d/c) dv(t) + gamma^4 (d/c)^2 dvdot(t).
/// Derivatives on new segments come from centered stencils of the given half-width.
/// Returns every node where dv is available.
std::vector<LinearSample> propagate_linearized(double beta, const LinearSeed& seed, int n_segments,
                                               const ModelParams& params, int half_width = 8);

/// Exact mode data on the N + 1 nodes covering [-delay, 0].
LinearSeed mode_seed(double beta, const std::vector<ModeComponent>& modes, int nodes_per_delay,
                     const ModelParams& params);

struct ModeFit {
  double growth_per_delay = 0.0;   // Re mu of the dominant pair
  double angular_per_delay = 0.0;  // |Im mu| of the dominant pair
};

/// Two-term linear recurrence x_{k+2} = p x_{k+1} - q x_k fitted across whole
/// segments (same phase in each). Segment k is values[first + k N .. first + (k+1) N).
ModeFit segment_prony_fit(const std::vector<double>& values, std::size_t first, std::size_t nodes_per_segment,
                          std::size_t n_segments);

struct SpectralPeak {
  double omega = 0.0;
  double power = 0.0;
};

struct MeasureOptions {
  bool compensate_growth = true;
  std::optional<double> growth_rate;  // per unit time; estimated when absent
  int samples = 1024;
  int oversample = 8;
  std::size_t max_peaks = 16;
};

/// Least-squares periodogram of a(t) resampled evenly on [t0, t1], optionally
/// multiplied by exp(-sigma (t - t0)) to undo exponential growth. Power at omega is the
/// variance explained by a constant plus a cos/sin pair at omega. Frequency grid step is
/// 2 pi / (T oversample) up to Nyquist. Peaks (angular frequency, power) sorted by
/// decreasing power; empty when a(t) is constant.
std::vector<SpectralPeak> measure_spectrum(const TrajectoryHistory& trajectory, double t0, double t1,
                                           const MeasureOptions& opts = {});

/// Least-squares slope of log|a| through the local extrema of |a| on [t0, t1].
double estimate_growth_rate(const TrajectoryHistory& trajectory, double t0, double t1, int samples = 2048);

}  // namespace zitterdyn
