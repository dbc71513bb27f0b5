#include "eggsim/contact_curve.hpp"

#include <ostream>
#include <stdexcept>

#include "eggsim/geometry.hpp"
#include "eggsim/profile.hpp"

namespace eggsim {

namespace {

void check_arguments(const std::vector<double>& ratios, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("contact curve needs at least 2 samples");
  }
  for (double r : ratios) {
    if (!(r >= 1.0)) {
      throw std::invalid_argument("axis ratio must be >= 1, got " + format_double(r));
    }
  }
}

std::vector<ContactCurve> allocate(const std::vector<double>& ratios, int samples) {
  std::vector<ContactCurve> curves(ratios.size());
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    curves[k].ratio = ratios[k];
    curves[k].beta_v_deg.assign(samples, 0.0);
    curves[k].beta_p_deg.assign(samples, 0.0);
  }
  return curves;
}

void fill(ContactCurve& c, int i, int samples) {
  const EllipsoidShape shape(c.ratio, 1.0);
  const double bv = 90.0 * i / (samples - 1);
  c.beta_v_deg[i] = bv;
  c.beta_p_deg[i] = contact_point(bv * kPi / 180.0, shape).beta_p * 180.0 / kPi;
}

} // namespace

bool ContactCurve::monotone() const {
  for (std::size_t i = 1; i < beta_p_deg.size(); ++i) {
    if (!(beta_p_deg[i] > beta_p_deg[i - 1])) {
      return false;
    }
  }
  return true;
}

std::vector<ContactCurve> contact_curves(const std::vector<double>& ratios, int samples) {
  check_arguments(ratios, samples);
  std::vector<ContactCurve> curves = allocate(ratios, samples);
  const long long total = static_cast<long long>(ratios.size()) * samples;
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < total; ++n) {
    fill(curves[n / samples], static_cast<int>(n % samples), samples);
  }
  return curves;
}

std::vector<ContactCurve> contact_curves_serial(const std::vector<double>& ratios, int samples) {
  check_arguments(ratios, samples);
  std::vector<ContactCurve> curves = allocate(ratios, samples);
  for (ContactCurve& c : curves) {
    for (int i = 0; i < samples; ++i) {
      fill(c, i, samples);
    }
  }
  return curves;
}

void write_contact_curves_csv(std::ostream& out, const std::vector<ContactCurve>& curves) {
  out << "ratio,beta_v_deg,beta_p_deg\n";
  for (const ContactCurve& c : curves) {
    for (std::size_t i = 0; i < c.beta_v_deg.size(); ++i) {
      out << format_double(c.ratio) << ',' << format_double(c.beta_v_deg[i]) << ','
          << format_double(c.beta_p_deg[i]) << '\n';
    }
  }
}

} // namespace eggsim
