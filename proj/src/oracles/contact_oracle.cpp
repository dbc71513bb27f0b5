#include "eggsim/oracles/contact_oracle.hpp"

#include <cmath>

namespace eggsim::oracles {

namespace {

double support(double b, double beta_v, const EllipsoidShape& shape) {
  return radial_distance(b, shape) * std::cos(b - beta_v);
}

double sample_beta(int i, int samples) { return 0.5 * kPi * i / (samples - 1); }

} // namespace

double lowest_point_angle(double beta_v, const EllipsoidShape& shape, int grid) {
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i <= grid; ++i) {
    const double v = support(kPi * i / grid, beta_v, shape);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = kPi * std::max(best - 1, 0) / grid;
  double hi = kPi * std::min(best + 1, grid) / grid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = support(a, beta_v, shape);
  double fb = support(b, beta_v, shape);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = support(b, beta_v, shape);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = support(a, beta_v, shape);
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<double>> lowest_point_sweep(const std::vector<double>& ratios, int samples) {
  std::vector<std::vector<double>> out(ratios.size(), std::vector<double>(samples, 0.0));
  const long long total = static_cast<long long>(ratios.size()) * samples;
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < total; ++n) {
    const std::size_t k = static_cast<std::size_t>(n / samples);
    const int i = static_cast<int>(n % samples);
    out[k][i] = lowest_point_angle(sample_beta(i, samples), EllipsoidShape(ratios[k], 1.0));
  }
  return out;
}

std::vector<std::vector<double>> lowest_point_sweep_serial(const std::vector<double>& ratios, int samples) {
  std::vector<std::vector<double>> out(ratios.size(), std::vector<double>(samples, 0.0));
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const EllipsoidShape shape(ratios[k], 1.0);
    for (int i = 0; i < samples; ++i) {
      out[k][i] = lowest_point_angle(sample_beta(i, samples), shape);
    }
  }
  return out;
}

} // namespace eggsim::oracles
