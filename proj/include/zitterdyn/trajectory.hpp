#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zitterdyn/model.hpp"

namespace zitterdyn {

/// Time-ordered record of center-of-mass states with quintic Hermite
/// interpolation through (x, v, a). The interpolant is C^2, passes through every
/// node, and its derivative is the interpolated velocity everywhere.
class TrajectoryHistory {
 public:
  TrajectoryHistory() = default;
  /// Throws InvalidArgument unless times are strictly increasing and finite.
  explicit TrajectoryHistory(std::vector<KinematicState> samples);

  std::span<const KinematicState> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const KinematicState& operator[](std::size_t i) const { return samples_[i]; }

  double t_min() const;
  double t_max() const;
  bool covers(double t) const { return !empty() && t >= t_min() && t <= t_max(); }

  /// Interpolated state at t; InvalidArgument outside [t_min, t_max].
  KinematicState at(double t) const;

  /// Index i with samples[i].t <= t < samples[i+1].t (clamped to the last interval).
  std::size_t interval_of(double t) const;

 private:
  std::vector<KinematicState> samples_;
};

/// Throws NumericalFailure(SpeedLimit) if any sample has |v| >= c.
void require_subluminal(const TrajectoryHistory& h, const ModelParams& p);

/// The same samples with t -> -t, v -> -v (a unchanged), re-sorted in time.
TrajectoryHistory time_reversed(const TrajectoryHistory& h);

}  // namespace zitterdyn
