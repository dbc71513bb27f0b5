#include "eggsim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace eggsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SplineFn::SplineFn(std::vector<double> t, std::vector<double> y) : t_(std::move(t)), y_(std::move(y)) {
  const std::size_t n = t_.size();
  if (n < 2 || y_.size() != n) {
    throw ProfileError("spline needs at least two (t, y) knots");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t_[i] > t_[i - 1])) {
      throw ProfileError("spline knot times must be strictly increasing");
    }
  }
  m_.assign(n, 0.0);
  if (n < 3) {
    return;
  }
  // Thomas algorithm for the interior second derivatives.
  std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    if (i > 1) {
      const double w = h0 / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
  }
}

Sample SplineFn::sample(double t) const {
  const std::size_t n = t_.size();
  auto interior = [&](std::size_t i, double x) {
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - x) / h;
    const double b = (x - t_[i]) / h;
    Sample s;
    s.value = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    s.rate = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    s.accel = a * m_[i] + b * m_[i + 1];
    return s;
  };
  if (t < t_.front()) {
    Sample edge = interior(0, t_.front());
    return {y_.front() + edge.rate * (t - t_.front()), edge.rate, 0.0};
  }
  if (t > t_.back()) {
    Sample edge = interior(n - 2, t_.back());
    return {y_.back() + edge.rate * (t - t_.back()), edge.rate, 0.0};
  }
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_.begin());
  i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
  return interior(i, t);
}

namespace {

struct Sampler {
  double t;
  Sample operator()(const ConstantFn& f) const { return {f.value, 0.0, 0.0}; }
  Sample operator()(const LinearFn& f) const { return {f.value0 + f.slope * t, f.slope, 0.0}; }
  Sample operator()(const RampFn& f) const {
    if (t <= f.t0) {
      return {f.v0, 0.0, 0.0};
    }
    if (t >= f.t1) {
      return {f.v1, 0.0, 0.0};
    }
    const double span = f.t1 - f.t0;
    const double s = (t - f.t0) / span;
    const double dv = f.v1 - f.v0;
    return {f.v0 + dv * s * s * (3.0 - 2.0 * s), dv * 6.0 * s * (1.0 - s) / span,
            dv * (6.0 - 12.0 * s) / (span * span)};
  }
  Sample operator()(const SinusoidFn& f) const {
    const double w = 2.0 * kPi * f.frequency;
    const double arg = w * t + f.phase;
    return {f.offset + f.amplitude * std::sin(arg), f.amplitude * w * std::cos(arg),
            -f.amplitude * w * w * std::sin(arg)};
  }
  Sample operator()(const SplineFn& f) const { return f.sample(t); }
};

std::string join_args(const std::vector<double>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += format_double(args[i]);
  }
  return out;
}

struct Printer {
  std::string operator()(const ConstantFn& f) const { return format_double(f.value); }
  std::string operator()(const LinearFn& f) const { return "linear(" + join_args({f.value0, f.slope}) + ")"; }
  std::string operator()(const RampFn& f) const { return "ramp(" + join_args({f.t0, f.t1, f.v0, f.v1}) + ")"; }
  std::string operator()(const SinusoidFn& f) const {
    return "sin(" + join_args({f.amplitude, f.frequency, f.phase, f.offset}) + ")";
  }
  std::string operator()(const SplineFn& f) const {
    std::vector<double> args;
    for (std::size_t i = 0; i < f.knots().size(); ++i) {
      args.push_back(f.knots()[i]);
      args.push_back(f.values()[i]);
    }
    return "spline(" + join_args(args) + ")";
  }
};

struct Scaler {
  double k;
  Primitive operator()(const ConstantFn& f) const { return ConstantFn{f.value * k}; }
  Primitive operator()(const LinearFn& f) const { return LinearFn{f.value0 * k, f.slope * k}; }
  Primitive operator()(const RampFn& f) const { return RampFn{f.t0, f.t1, f.v0 * k, f.v1 * k}; }
  Primitive operator()(const SinusoidFn& f) const {
    return SinusoidFn{f.amplitude * k, f.frequency, f.phase, f.offset * k};
  }
  Primitive operator()(const SplineFn& f) const {
    std::vector<double> y = f.values();
    for (double& v : y) {
      v *= k;
    }
    return SplineFn(f.knots(), std::move(y));
  }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) {
    throw ProfileError("expected a number");
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ProfileError("not a finite number: '" + s + "'");
  }
  return v;
}

// Splits at top-level occurrences of sep, leaving exponent signs alone.
std::vector<std::string_view> split_top_level(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    } else if (c == sep && depth == 0) {
      const bool exponent = sep == '+' && i >= 2 && (text[i - 1] == 'e' || text[i - 1] == 'E') &&
                            (std::isdigit(static_cast<unsigned char>(text[i - 2])) || text[i - 2] == '.');
      if (!exponent) {
        parts.push_back(text.substr(start, i - start));
        start = i + 1;
      }
    }
  }
  if (depth != 0) {
    throw ProfileError("unbalanced parentheses in '" + std::string(text) + "'");
  }
  parts.push_back(text.substr(start));
  return parts;
}

Primitive parse_primitive(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    return ConstantFn{parse_number(text)};
  }
  if (text.back() != ')') {
    throw ProfileError("malformed term '" + std::string(text) + "'");
  }
  const std::string_view name = trim(text.substr(0, open));
  std::vector<double> args;
  for (std::string_view a : split_top_level(text.substr(open + 1, text.size() - open - 2), ',')) {
    args.push_back(parse_number(a));
  }
  auto expect = [&](std::size_t n) {
    if (args.size() != n) {
      throw ProfileError(std::string(name) + " takes " + std::to_string(n) + " arguments, got " +
                         std::to_string(args.size()));
    }
  };
  if (name == "const") {
    expect(1);
    return ConstantFn{args[0]};
  }
  if (name == "linear") {
    expect(2);
    return LinearFn{args[0], args[1]};
  }
  if (name == "ramp") {
    expect(4);
    if (!(args[1] > args[0])) {
      throw ProfileError("ramp requires t1 > t0");
    }
    return RampFn{args[0], args[1], args[2], args[3]};
  }
  if (name == "sin") {
    expect(4);
    return SinusoidFn{args[0], args[1], args[2], args[3]};
  }
  if (name == "spline") {
    if (args.size() < 4 || args.size() % 2 != 0) {
      throw ProfileError("spline takes pairs t, y (at least two)");
    }
    std::vector<double> t, y;
    for (std::size_t i = 0; i < args.size(); i += 2) {
      t.push_back(args[i]);
      y.push_back(args[i + 1]);
    }
    return SplineFn(std::move(t), std::move(y));
  }
  throw ProfileError("unknown time function '" + std::string(name) + "'");
}

} // namespace

TimeFunction TimeFunction::parse(std::string_view text) {
  if (trim(text).empty()) {
    throw ProfileError("empty time function");
  }
  std::vector<Primitive> terms;
  for (std::string_view part : split_top_level(text, '+')) {
    terms.push_back(parse_primitive(part));
  }
  return TimeFunction(std::move(terms));
}

std::string TimeFunction::to_string() const {
  if (terms_.empty()) {
    return "0";
  }
  std::string out;
  for (const Primitive& p : terms_) {
    if (!out.empty()) {
      out += " + ";
    }
    out += std::visit(Printer{}, p);
  }
  return out;
}

Sample TimeFunction::sample(double t) const {
  Sample total;
  for (const Primitive& p : terms_) {
    const Sample s = std::visit(Sampler{t}, p);
    total.value += s.value;
    total.rate += s.rate;
    total.accel += s.accel;
  }
  return total;
}

TimeFunction TimeFunction::scaled(double k) const {
  std::vector<Primitive> out;
  for (const Primitive& p : terms_) {
    out.push_back(std::visit(Scaler{k}, p));
  }
  return TimeFunction(std::move(out));
}

bool TimeFunction::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Primitive& p) {
    const auto* c = std::get_if<ConstantFn>(&p);
    return c != nullptr && c->value == 0.0;
  });
}

void TimeFunction::check_consistency(double t_begin, double t_end, std::string_view name) const {
  constexpr int kSamples = 64;
  const double span = std::max(t_end - t_begin, 1e-3);
  const double h = 1e-6 * span;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = t_begin + span * (k + 0.37) / (kSamples + 1);
    const Sample s = sample(t);
    const Sample lo = sample(t - h);
    const Sample hi = sample(t + h);
    const double fd_rate = (hi.value - lo.value) / (2.0 * h);
    const double rate_tol = 1e-5 * (1.0 + std::abs(s.rate) + std::abs(s.value) / span);
    if (!(std::abs(fd_rate - s.rate) <= rate_tol)) {
      throw ProfileError(std::string(name) + ": first derivative inconsistent at t=" + format_double(t));
    }
    // Second derivatives may jump at knots; accept either one-sided difference.
    const double fd_left = (s.rate - lo.rate) / h;
    const double fd_right = (hi.rate - s.rate) / h;
    const double accel_tol = 1e-3 * (1.0 + std::abs(s.accel) + std::abs(s.rate) / span);
    if (!(std::abs(fd_left - s.accel) <= accel_tol || std::abs(fd_right - s.accel) <= accel_tol)) {
      throw ProfileError(std::string(name) + ": second derivative inconsistent at t=" + format_double(t));
    }
  }
}

void ActuatorProfile::check_consistency(double t_end) const {
  mu1.check_consistency(0.0, t_end, "mu1");
  mu2.check_consistency(0.0, t_end, "mu2");
  rho_rate.check_consistency(0.0, t_end, "rho_rate");
}

} // namespace eggsim
