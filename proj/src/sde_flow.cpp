#include "fbel/sde_flow.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fbel/error.hpp"

namespace fbel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double step_value(double x, double upper, double lower, double threshold) {
  return x > threshold ? upper : lower;
}

// Gaussian-cdf transition from 0 to 1 around the threshold.
double transition(double x, double threshold, double eps) {
  return 0.5 * (1.0 + std::erf((x - threshold) / (eps * std::numbers::sqrt2)));
}

double transition_slope(double x, double threshold, double eps) {
  const double z = (x - threshold) / eps;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * eps);
}

}  // namespace

DriftSpec DriftSpec::zero() { return DriftSpec(); }

DriftSpec DriftSpec::linear(double lambda) {
  DriftSpec d;
  d.kind_ = Kind::linear;
  d.p0_ = lambda;
  return d;
}

DriftSpec DriftSpec::regime_switch(double b1, double b2, double threshold) {
  DriftSpec d;
  d.kind_ = Kind::regime_switch;
  d.p0_ = b1;
  d.p1_ = b2;
  d.p2_ = threshold;
  return d;
}

DriftSpec DriftSpec::regime_switch_ou(double a1, double a2, double threshold, double level) {
  DriftSpec d;
  d.kind_ = Kind::regime_switch_ou;
  d.p0_ = a1;
  d.p1_ = a2;
  d.p2_ = threshold;
  d.p3_ = level;
  return d;
}

DriftSpec DriftSpec::custom(Field field, Jacobian jacobian, double bound, double l1_bound, std::string name) {
  if (!field) throw InvalidArgument("custom drift needs a field");
  DriftSpec d;
  d.kind_ = Kind::custom;
  d.field_ = std::move(field);
  d.jacobian_ = std::move(jacobian);
  d.custom_bound_ = bound;
  d.custom_l1_ = l1_bound;
  d.name_ = std::move(name);
  return d;
}

double DriftSpec::bound() const noexcept {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return p0_ == 0.0 ? 0.0 : kInf;
    case Kind::regime_switch: return std::max(std::abs(p0_), std::abs(p1_));
    case Kind::regime_switch_ou: return (p0_ == 0.0 && p1_ == 0.0) ? 0.0 : kInf;
    case Kind::custom: return custom_bound_;
  }
  return kInf;
}

double DriftSpec::l1_bound() const noexcept {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::custom: return custom_l1_;
    default: return bound() == 0.0 ? 0.0 : kInf;
  }
}

std::string DriftSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (sign_ < 0.0) os << "neg:";
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::linear: os << "linear:" << p0_; break;
    case Kind::regime_switch: os << "regime:" << p0_ << ',' << p1_ << ',' << p2_; break;
    case Kind::regime_switch_ou: os << "regime-ou:" << p0_ << ',' << p1_ << ',' << p2_ << ',' << p3_; break;
    case Kind::custom: os << "custom:" << name_; break;
  }
  return os.str();
}

void DriftSpec::evaluate(double t, std::span<const double> x, std::span<double> out) const {
  if (out.size() != x.size()) throw InvalidArgument("drift output size mismatch");
  switch (kind_) {
    case Kind::zero:
      for (double& v : out) v = 0.0;
      return;
    case Kind::linear:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = sign_ * p0_ * x[i];
      return;
    case Kind::regime_switch:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = sign_ * step_value(x[i], p0_, p1_, p2_);
      return;
    case Kind::regime_switch_ou:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = sign_ * step_value(x[i], p0_, p1_, p2_) * (p3_ - x[i]);
      return;
    case Kind::custom:
      field_(t, x, out);
      if (sign_ < 0.0) {
        for (double& v : out) v = -v;
      }
      return;
  }
}

DriftSpec DriftSpec::negated() const {
  DriftSpec d = *this;
  d.sign_ = -sign_;
  return d;
}

MollifiedDrift::MollifiedDrift(DriftSpec base, double epsilon) : base_(std::move(base)), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("mollification width must be positive");
}

double MollifiedDrift::value_1d(double x) const {
  const DriftSpec& b = base_;
  switch (b.kind_) {
    case DriftSpec::Kind::zero: return 0.0;
    case DriftSpec::Kind::linear: return b.sign_ * b.p0_ * x;
    case DriftSpec::Kind::regime_switch:
      return b.sign_ * (b.p1_ + (b.p0_ - b.p1_) * transition(x, b.p2_, epsilon_));
    case DriftSpec::Kind::regime_switch_ou:
      return b.sign_ * (b.p1_ + (b.p0_ - b.p1_) * transition(x, b.p2_, epsilon_)) * (b.p3_ - x);
    case DriftSpec::Kind::custom: break;
  }
  throw InvalidArgument("value_1d requires a coordinate-wise drift");
}

double MollifiedDrift::derivative_1d(double x) const {
  const DriftSpec& b = base_;
  switch (b.kind_) {
    case DriftSpec::Kind::zero: return 0.0;
    case DriftSpec::Kind::linear: return b.sign_ * b.p0_;
    case DriftSpec::Kind::regime_switch:
      return b.sign_ * (b.p0_ - b.p1_) * transition_slope(x, b.p2_, epsilon_);
    case DriftSpec::Kind::regime_switch_ou: {
      const double rate = b.p1_ + (b.p0_ - b.p1_) * transition(x, b.p2_, epsilon_);
      const double rate_slope = (b.p0_ - b.p1_) * transition_slope(x, b.p2_, epsilon_);
      return b.sign_ * (rate_slope * (b.p3_ - x) - rate);
    }
    case DriftSpec::Kind::custom: break;
  }
  throw InvalidArgument("derivative_1d requires a coordinate-wise drift");
}

void MollifiedDrift::value(double t, std::span<const double> x, std::span<double> out) const {
  if (out.size() != x.size()) throw InvalidArgument("drift output size mismatch");
  if (!coordinatewise()) {
    base_.evaluate(t, x, out);
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = value_1d(x[i]);
}

void MollifiedDrift::jacobian(double t, std::span<const double> x, std::span<double> jac) const {
  const std::size_t d = x.size();
  if (jac.size() != d * d) throw InvalidArgument("jacobian output size mismatch");
  if (!coordinatewise()) {
    if (!base_.jacobian_) throw InvalidArgument("custom drift has no jacobian");
    base_.jacobian_(t, x, jac);
    if (base_.sign_ < 0.0) {
      for (double& v : jac) v = -v;
    }
    return;
  }
  for (double& v : jac) v = 0.0;
  for (std::size_t i = 0; i < d; ++i) jac[i * d + i] = derivative_1d(x[i]);
}

MollifiedDrift mollify(const DriftSpec& base, double epsilon) { return MollifiedDrift(base, epsilon); }

double default_epsilon(const GridSpec& grid, HurstParam h) {
  return 4.0 * std::sqrt(grid.step()) * std::pow(grid.horizon(), h.value());
}

namespace {

template <class Field>
void euler_impl(const Field& field, std::span<const double> x0, const JointPath& path, StatePath& out) {
  const std::size_t d = path.dim;
  if (x0.size() != d) throw InvalidArgument("initial state dimension does not match the path");
  const std::size_t n = path.grid.n_steps();
  const double dt = path.grid.step();
  out.grid = path.grid;
  out.dim = d;
  out.x.resize((n + 1) * d);
  std::copy(x0.begin(), x0.end(), out.x.begin());
  // X[k] = x0 + (drift sum) + bh[k]: the same recursion, with the noise added
  // once instead of by increments, so zero drift reproduces x0 + bh exactly.
  std::vector<double> b(d), drift_sum(d, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::span<const double> xk(out.x.data() + k * d, d);
    field(path.grid.time(k), xk, std::span<double>(b));
    for (std::size_t i = 0; i < d; ++i) {
      drift_sum[i] += b[i] * dt;
      const double next = (x0[i] + drift_sum[i]) + path.BH(k + 1, i);
      if (!std::isfinite(next)) throw NumericalError("euler_solve: non-finite state", k + 1);
      out.x[(k + 1) * d + i] = next;
    }
  }
}

}  // namespace

void euler_solve_into(const MollifiedDrift& drift, std::span<const double> x0, const JointPath& path,
                      StatePath& out) {
  if (path.dim == 1 && drift.coordinatewise()) {
    euler_impl([&](double, std::span<const double> x, std::span<double> b) { b[0] = drift.value_1d(x[0]); },
               x0, path, out);
    return;
  }
  euler_impl([&](double t, std::span<const double> x, std::span<double> b) { drift.value(t, x, b); }, x0,
             path, out);
}

StatePath euler_solve(const MollifiedDrift& drift, std::span<const double> x0, const JointPath& path) {
  StatePath out;
  euler_solve_into(drift, x0, path, out);
  return out;
}

StatePath euler_solve(const DriftSpec& drift, std::span<const double> x0, const JointPath& path) {
  StatePath out;
  euler_impl([&](double t, std::span<const double> x, std::span<double> b) { drift.evaluate(t, x, b); }, x0,
             path, out);
  return out;
}

void flow_derivative_into(const MollifiedDrift& drift, const StatePath& state, FlowPath& out) {
  const std::size_t d = state.dim;
  const std::size_t n = state.grid.n_steps();
  if (state.x.size() != (n + 1) * d) throw InvalidArgument("flow_derivative: state dimension mismatch");
  const double dt = state.grid.step();
  out.grid = state.grid;
  out.dim = d;
  out.jac.assign((n + 1) * d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) out.jac[i * d + i] = 1.0;

  if (d == 1) {
    double j = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double db = drift.coordinatewise()
                            ? drift.derivative_1d(state.x[k])
                            : [&] {
                                double v = 0.0;
                                drift.jacobian(state.grid.time(k), state.state(k), std::span<double>(&v, 1));
                                return v;
                              }();
      const double factor = 1.0 + db * dt;
      if (!(factor > 0.0)) throw NumericalError("flow_derivative: non-positive flow factor", k + 1);
      j *= factor;
      out.jac[k + 1] = j;
    }
    return;
  }

  std::vector<double> db(d * d);
  for (std::size_t k = 0; k < n; ++k) {
    drift.jacobian(state.grid.time(k), state.state(k), db);
    const double* jk = &out.jac[k * d * d];
    double* jn = &out.jac[(k + 1) * d * d];
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t m = 0; m < d; ++m) s += db[r * d + m] * jk[m * d + c];
        jn[r * d + c] = jk[r * d + c] + s * dt;
        if (!std::isfinite(jn[r * d + c])) throw NumericalError("flow_derivative: non-finite Jacobian", k + 1);
      }
    }
  }
}

FlowPath flow_derivative(const MollifiedDrift& drift, const StatePath& state) {
  FlowPath out;
  flow_derivative_into(drift, state, out);
  return out;
}

}  // namespace fbel
