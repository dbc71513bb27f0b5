#pragma once

// Brute-force lowest-point search, independent of the closed-form contact map.

#include <vector>

#include "eggsim/geometry.hpp"

namespace eggsim::oracles {

/// Angle from the long axis of the shell point lowest at inclination beta_v:
/// maximizes |r(b)| cos(b - beta_v) over b in [0, pi] by grid search plus golden-section refinement.
double lowest_point_angle(double beta_v, const EllipsoidShape& shape, int grid = 10000);

/// Oracle contact angles (rad) for beta_v uniform over [0, pi/2], per ratio. OpenMP-parallel.
std::vector<std::vector<double>> lowest_point_sweep(const std::vector<double>& ratios, int samples);
std::vector<std::vector<double>> lowest_point_sweep_serial(const std::vector<double>& ratios, int samples);

} // namespace eggsim::oracles
