#include "zitterdyn/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zitterdyn/errors.hpp"

namespace zitterdyn {

TrajectoryHistory::TrajectoryHistory(std::vector<KinematicState> samples) : samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.v) || !std::isfinite(s.a)) {
      throw InvalidArgument("trajectory sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s.t > samples_[i - 1].t)) {
      throw InvalidArgument("trajectory times must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
}

double TrajectoryHistory::t_min() const {
  if (empty()) throw InvalidArgument("empty trajectory");
  return samples_.front().t;
}

double TrajectoryHistory::t_max() const {
  if (empty()) throw InvalidArgument("empty trajectory");
  return samples_.back().t;
}

std::size_t TrajectoryHistory::interval_of(double t) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double value, const KinematicState& s) { return value < s.t; });
  std::size_t i = static_cast<std::size_t>(it - samples_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, samples_.size() - 2);
}

KinematicState TrajectoryHistory::at(double t) const {
  if (!covers(t)) {
    throw InvalidArgument("time " + std::to_string(t) + " outside trajectory span");
  }
  if (samples_.size() == 1) return samples_.front();
  const std::size_t i = interval_of(t);
  const KinematicState& s0 = samples_[i];
  const KinematicState& s1 = samples_[i + 1];
  if (t == s0.t) return s0;
  if (t == s1.t) return s1;

  const double h = s1.t - s0.t;
  const double u = (t - s0.t) / h;
  // Monomial coefficients of the quintic in u matching value, slope and curvature at both ends.
  const double c0 = s0.x;
  const double c1 = h * s0.v;
  const double c2 = 0.5 * h * h * s0.a;
  const double Y = s1.x - (c0 + c1 + c2);
  const double V = h * s1.v - (c1 + 2.0 * c2);
  const double A = h * h * s1.a - 2.0 * c2;
  const double c3 = 10.0 * Y - 4.0 * V + 0.5 * A;
  const double c4 = -15.0 * Y + 7.0 * V - A;
  const double c5 = 6.0 * Y - 3.0 * V + 0.5 * A;

  KinematicState out;
  out.t = t;
  out.x = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
  out.v = (c1 + u * (2.0 * c2 + u * (3.0 * c3 + u * (4.0 * c4 + u * 5.0 * c5)))) / h;
  out.a = (2.0 * c2 + u * (6.0 * c3 + u * (12.0 * c4 + u * 20.0 * c5))) / (h * h);
  return out;
}

void require_subluminal(const TrajectoryHistory& h, const ModelParams& p) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(std::abs(h[i].v) < p.c)) {
      throw NumericalFailure(FailureKind::SpeedLimit,
                             "sample " + std::to_string(i) + " at t=" + std::to_string(h[i].t) +
                                 " has |v| >= c");
    }
  }
}

TrajectoryHistory time_reversed(const TrajectoryHistory& h) {
  std::vector<KinematicState> out;
  out.reserve(h.size());
  for (std::size_t i = h.size(); i-- > 0;) {
    const auto& s = h[i];
    out.push_back({-s.t, s.x, -s.v, s.a});
  }
  return TrajectoryHistory(std::move(out));
}

}  // namespace zitterdyn
