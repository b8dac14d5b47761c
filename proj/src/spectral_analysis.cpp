#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/errors.hpp"

namespace zitterdyn {
namespace {

std::vector<double> sample_acceleration(const TrajectoryHistory& tr, double t0, double t1, int n) {
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = (i == n - 1) ? t1 : t0 + (t1 - t0) * i / (n - 1);
    y[static_cast<std::size_t>(i)] = tr.at(t).a;
  }
  return y;
}

void check_window(const TrajectoryHistory& tr, double t0, double t1) {
  if (tr.size() < 2) throw NumericalFailure(FailureKind::WindowTooShort, "trajectory has fewer than two samples");
  if (!(t0 < t1)) throw NumericalFailure(FailureKind::WindowTooShort, "empty spectral window");
  if (t0 < tr.t_min() || t1 > tr.t_max()) throw InvalidArgument("spectral window exceeds the trajectory span");
  const std::size_t lo = tr.interval_of(t0);
  const std::size_t hi = tr.interval_of(t1);
  if (hi - lo < 8) throw NumericalFailure(FailureKind::WindowTooShort, "window holds fewer than 8 trajectory intervals");
}

}  // namespace

ModeFit segment_prony_fit(const std::vector<double>& values, std::size_t first, std::size_t N, std::size_t n_segments) {
  if (n_segments < 3 || N == 0) throw InvalidArgument("Prony fit needs at least three segments");
  if (first + n_segments * N > values.size()) throw InvalidArgument("Prony fit window exceeds the data");
  // Normal equations for x_{k+2} = p x_{k+1} - q x_k.
  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (std::size_t k = 0; k + 2 < n_segments; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      const double x0 = values[first + k * N + i];
      const double x1 = values[first + (k + 1) * N + i];
      const double x2 = values[first + (k + 2) * N + i];
      s11 += x1 * x1;
      s12 += -x1 * x0;
      s22 += x0 * x0;
      b1 += x1 * x2;
      b2 += -x0 * x2;
    }
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 0.0)) throw NumericalFailure(FailureKind::NonConvergence, "degenerate Prony system");
  const double p = (b1 * s22 - b2 * s12) / det;
  const double q = (s11 * b2 - s12 * b1) / det;
  ModeFit fit;
  if (q > 0.0) {
    fit.growth_per_delay = 0.5 * std::log(q);
    const double c = std::clamp(p / (2.0 * std::sqrt(q)), -1.0, 1.0);
    fit.angular_per_delay = std::acos(c);
  } else {
    fit.growth_per_delay = std::nan("");
  }
  return fit;
}

double estimate_growth_rate(const TrajectoryHistory& tr, double t0, double t1, int samples) {
  check_window(tr, t0, t1);
  if (samples < 16) throw InvalidArgument("need at least 16 samples");
  const auto y = sample_acceleration(tr, t0, t1, samples);
  const double dt = (t1 - t0) / (samples - 1);
  std::vector<double> ts, ls;
  for (int i = 1; i + 1 < samples; ++i) {
    const double a = std::abs(y[i - 1]), b = std::abs(y[i]), c = std::abs(y[i + 1]);
    if (b > 0.0 && b >= a && b > c) {
      ts.push_back(t0 + i * dt);
      ls.push_back(std::log(b));
    }
  }
  if (ts.size() < 3) return 0.0;
  const double n = static_cast<double>(ts.size());
  double mt = 0, ml = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= n;
  ml /= n;
  double stt = 0, stl = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (ls[i] - ml);
  }
  return stt > 0.0 ? stl / stt : 0.0;
}

std::vector<SpectralPeak> measure_spectrum(const TrajectoryHistory& tr, double t0, double t1,
                                           const MeasureOptions& o) {
  check_window(tr, t0, t1);
  if (o.samples < 16 || o.oversample < 1) throw InvalidArgument("spectrum needs >= 16 samples and oversample >= 1");
  const int n = o.samples;
  auto y = sample_acceleration(tr, t0, t1, n);
  const double T = t1 - t0;
  const double dt = T / (n - 1);

  double raw_max = 0.0;
  for (double v : y) raw_max = std::max(raw_max, std::abs(v));
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double dev_max = 0.0;
  for (double v : y) dev_max = std::max(dev_max, std::abs(v - mean));
  if (!(dev_max > 1e-10 * raw_max) || dev_max == 0.0) return {};

  double sigma = 0.0;
  if (o.compensate_growth) sigma = o.growth_rate ? *o.growth_rate : estimate_growth_rate(tr, t0, t1);
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] *= std::exp(-sigma * i * dt);

  // Least-squares periodogram: at each frequency fit c0 + c1 cos + c2 sin and keep the
  // variance the oscillatory pair explains. Unlike a windowed DFT this does not bias the
  // peak when the window holds only a couple of cycles.
  const double d_omega = 2.0 * std::numbers::pi / (T * o.oversample);
  const double nyquist = std::numbers::pi / dt;
  const auto nf = static_cast<std::size_t>(nyquist / d_omega);
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= n;
  double total = 0.0;
  for (auto& v : y) {
    v -= ybar;
    total += v * v;
  }
  std::vector<double> power(nf + 1, 0.0);
  for (std::size_t k = 1; k < nf; ++k) {
    const double w = k * d_omega;
    double sc = 0, ss = 0, scc = 0, sss = 0, scs = 0, yc = 0, ys = 0;
    for (int i = 0; i < n; ++i) {
      const double arg = w * (i * dt - 0.5 * T);
      const double c = std::cos(arg), sn = std::sin(arg);
      const double v = y[static_cast<std::size_t>(i)];
      sc += c;
      ss += sn;
      scc += c * c;
      sss += sn * sn;
      scs += c * sn;
      yc += v * c;
      ys += v * sn;
    }
    // Project out the constant column, then solve the 2x2 system for the pair.
    const double a11 = scc - sc * sc / n, a22 = sss - ss * ss / n, a12 = scs - sc * ss / n;
    const double det = a11 * a22 - a12 * a12;
    if (!(det > 1e-12 * n * n)) continue;
    const double c1 = (yc * a22 - ys * a12) / det;
    const double c2 = (ys * a11 - yc * a12) / det;
    power[k] = std::min(total, c1 * yc + c2 * ys);
  }

  double top = 0.0;
  for (double p : power) top = std::max(top, p);
  std::vector<SpectralPeak> peaks;
  for (std::size_t k = 1; k < nf; ++k) {
    if (!(power[k] > power[k - 1] && power[k] >= power[k + 1])) continue;
    if (power[k] < 1e-8 * top) continue;
    if (!(power[k - 1] > 0.0 && power[k + 1] > 0.0)) {
      peaks.push_back({k * d_omega, power[k]});
      continue;
    }
    // Parabolic refinement on log power.
    const double a = std::log(power[k - 1]);
    const double b = std::log(power[k]);
    const double c = std::log(power[k + 1]);
    const double den = a - 2.0 * b + c;
    const double off = (den < 0.0) ? 0.5 * (a - c) / den : 0.0;
    peaks.push_back({(k + off) * d_omega, std::exp(b - 0.25 * (a - c) * off)});
  }
  std::sort(peaks.begin(), peaks.end(), [](const SpectralPeak& l, const SpectralPeak& r) {
    if (l.power != r.power) return l.power > r.power;
    return l.omega < r.omega;
  });
  if (peaks.size() > o.max_peaks) peaks.resize(o.max_peaks);
  return peaks;
}

}  // namespace zitterdyn
