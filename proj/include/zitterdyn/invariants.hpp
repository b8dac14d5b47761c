#pragma once

#include <string>
#include <vector>

#include "zitterdyn/model.hpp"
#include "zitterdyn/trajectory.hpp"

namespace zitterdyn {

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic text, no timings
};

/// Runs every module's property checks with fixed inputs and seeds.
std::vector<CheckResult> run_invariant_suite();

/// Largest |equation-of-motion residual| over nodes in [t0, t1], using the light-cone
/// emission time of each node as reception time.
double max_lightcone_residual(const TrajectoryHistory& trajectory, double t0, double t1, const ModelParams& params);

}  // namespace zitterdyn
