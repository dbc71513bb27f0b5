#pragma once

// Contact angle versus inclination datasets for a family of axis ratios.

#include <iosfwd>
#include <vector>

namespace eggsim {

struct ContactCurve {
  double ratio = 1.0; // r_long / r_short
  std::vector<double> beta_v_deg;
  std::vector<double> beta_p_deg;

  bool monotone() const;
};

/// Samples beta_v uniformly over [0, 90] degrees, endpoints included. Needs ratios >= 1, samples >= 2.
/// OpenMP-parallel over all (ratio, sample) pairs.
std::vector<ContactCurve> contact_curves(const std::vector<double>& ratios, int samples);

/// Single-threaded reference for contact_curves.
std::vector<ContactCurve> contact_curves_serial(const std::vector<double>& ratios, int samples);

/// Columns: ratio,beta_v_deg,beta_p_deg.
void write_contact_curves_csv(std::ostream& out, const std::vector<ContactCurve>& curves);

} // namespace eggsim
