#pragma once

// Time functions with analytic derivatives, used for actuator trajectories and
// applied external torques.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eggsim/geometry.hpp"

namespace eggsim {

class ProfileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Sample {
  double value = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

struct ConstantFn {
  double value = 0.0;
};

/// value0 + slope * t
struct LinearFn {
  double value0 = 0.0;
  double slope = 0.0;
};

/// C1 smoothstep from (t0, v0) to (t1, v1); constant outside [t0, t1].
struct RampFn {
  double t0 = 0.0, t1 = 1.0, v0 = 0.0, v1 = 0.0;
};

/// offset + amplitude * sin(2 pi frequency t + phase)
struct SinusoidFn {
  double amplitude = 0.0, frequency = 0.0, phase = 0.0, offset = 0.0;
};

/// Natural cubic spline through (t_i, y_i); linear continuation outside the knots.
class SplineFn {
public:
  SplineFn(std::vector<double> t, std::vector<double> y);

  Sample sample(double t) const;
  const std::vector<double>& knots() const { return t_; }
  const std::vector<double>& values() const { return y_; }

private:
  std::vector<double> t_, y_, m_; // m_: second derivatives at the knots
};

using Primitive = std::variant<ConstantFn, LinearFn, RampFn, SinusoidFn, SplineFn>;

/// Sum of primitives. Text form: `ramp(0, 1, 0, 2) + sin(0.5, 1, 0, 0) + 3`.
class TimeFunction {
public:
  TimeFunction() = default;
  explicit TimeFunction(std::vector<Primitive> terms) : terms_(std::move(terms)) {}
  static TimeFunction constant(double value) { return TimeFunction({ConstantFn{value}}); }

  /// Throws ProfileError on malformed input.
  static TimeFunction parse(std::string_view text);
  std::string to_string() const;

  Sample sample(double t) const;
  double value(double t) const { return sample(t).value; }

  /// All values multiplied by k (unit conversion).
  TimeFunction scaled(double k) const;
  bool is_zero() const;

  /// Throws ProfileError if the analytic derivatives disagree with finite
  /// differences on [t_begin, t_end].
  void check_consistency(double t_begin, double t_end, std::string_view name) const;

  bool operator==(const TimeFunction& other) const { return to_string() == other.to_string(); }

private:
  std::vector<Primitive> terms_;
};

/// Motor angles (rad) and gyro spin rate (rad/s) over time.
struct ActuatorProfile {
  TimeFunction mu1;
  TimeFunction mu2;
  TimeFunction rho_rate;

  void check_consistency(double t_end) const;
};

enum class TorqueFrame { Body, World };

struct ExternalTorque {
  TorqueFrame frame = TorqueFrame::World;
  TimeFunction x, y, z;

  Vector3 at(double t) const { return {x.value(t), y.value(t), z.value(t)}; }
  bool is_zero() const { return x.is_zero() && y.is_zero() && z.is_zero(); }
};

/// Shortest round-trip decimal text for a double (17 significant digits).
std::string format_double(double v);

} // namespace eggsim
