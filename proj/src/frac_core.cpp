#include "fbel/frac_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbel/error.hpp"
#include "fbel/special.hpp"

namespace fbel {

HurstParam::HurstParam(double h) : h_(h) {
  if (!(h > 0.0 && h < 0.5)) {
    throw DomainError("Hurst parameter must satisfy 0 < h < 1/2, got " + std::to_string(h));
  }
}

double HurstParam::strong_solution_threshold(std::size_t dim) noexcept {
  return 1.0 / (2.0 * (static_cast<double>(dim) + 2.0));
}

double HurstParam::continuous_version_threshold(std::size_t dim) noexcept {
  return 1.0 / (2.0 * (static_cast<double>(dim) + 3.0));
}

bool HurstParam::strong_solution_valid(std::size_t dim) const noexcept {
  return h_ < strong_solution_threshold(dim);
}

bool HurstParam::continuous_version_valid(std::size_t dim) const noexcept {
  return h_ < continuous_version_threshold(dim);
}

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("fractional order must satisfy 0 < alpha <= 1, got " + std::to_string(alpha));
  }
}

SampledFunction::SampledFunction(std::vector<double> grid_, std::vector<double> values_)
    : grid(std::move(grid_)), values(std::move(values_)) {
  if (grid.size() != values.size()) throw InvalidArgument("grid and values differ in length");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("grid must be strictly increasing");
  }
}

double SampledFunction::interpolate(double t) const {
  if (grid.empty()) throw InvalidArgument("interpolate on empty function");
  if (t <= grid.front()) return values.front();
  if (t >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double w = (t - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return (1.0 - w) * values[j - 1] + w * values[j];
}

double cov_rh(HurstParam h, double t, double s) {
  if (t < 0.0 || s < 0.0) throw DomainError("cov_rh: times must be non-negative");
  const double e = 2.0 * h.value();
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

double c_h(HurstParam h) {
  const double H = h.value();
  return std::sqrt(2.0 * H / ((1.0 - 2.0 * H) * special::beta(1.0 - 2.0 * H, H + 0.5)));
}

double big_c_h(HurstParam h) {
  const double H = h.value();
  return 1.0 / (c_h(h) * special::gamma(0.5 + H) * special::gamma(0.5 - H));
}

double kernel_profile(HurstParam h, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("kernel_profile: argument must lie in (0, 1)");
  const double H = h.value();
  // int_x^1 y^(-2H) (1-y)^(H-1/2) dy, the inner integral after u = s/y.
  const double tail = special::incomplete_beta_upper(x, 1.0 - 2.0 * H, H + 0.5);
  return std::pow(x, 0.5 - H) * std::pow(1.0 - x, H - 0.5) + (0.5 - H) * std::pow(x, H - 0.5) * tail;
}

double kernel_profile_integral(HurstParam h, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("kernel_profile_integral: argument must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  const double H = h.value();
  const double head = special::incomplete_beta(x, 1.5 - H, H + 0.5);
  const double tail = x < 1.0 ? special::incomplete_beta_upper(x, 1.0 - 2.0 * H, H + 0.5) : 0.0;
  return (head + (0.5 - H) * std::pow(x, H + 0.5) * tail) / (H + 0.5);
}

double kernel_kh(HurstParam h, double t, double s) {
  if (!(s > 0.0) || !(s < t)) throw DomainError("kernel_kh: requires 0 < s < t");
  return c_h(h) * std::pow(t, h.value() - 0.5) * kernel_profile(h, s / t);
}

namespace {

void require_finite(const SampledFunction& f, const char* who) {
  if (f.grid.empty()) throw InvalidArgument(std::string(who) + ": empty grid");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i])) {
      throw NumericalError(std::string(who) + ": non-finite input value", i);
    }
  }
}

}  // namespace

namespace {

// values minus the leading terms
std::vector<double> remainder(const SampledFunction& f) {
  std::vector<double> r = f.values;
  for (const auto& t : f.leading) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= t.coef * std::pow(f.grid[i] - f.grid[0], t.exponent);
  }
  return r;
}

}  // namespace

SampledFunction frac_int_left(FracOrder order, const SampledFunction& f) {
  require_finite(f, "frac_int_left");
  const double alpha = order.value();
  const double inv_gamma = 1.0 / special::gamma(alpha);
  const auto& x = f.grid;
  const std::vector<double> v = remainder(f);
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double a = x[i] - x[j];
      const double b = x[i] - x[j + 1];
      const double step = x[j + 1] - x[j];
      const double m0 = (std::pow(a, alpha) - std::pow(b, alpha)) / alpha;
      const double m1 = a * m0 - (std::pow(a, alpha + 1.0) - std::pow(b, alpha + 1.0)) / (alpha + 1.0);
      acc += v[j] * (m0 - m1 / step) + v[j + 1] * (m1 / step);
    }
    out[i] = acc * inv_gamma;
  }

  std::vector<PowerTerm> terms;
  for (const auto& t : f.leading) {
    const double p = t.exponent + alpha;
    terms.push_back({t.coef * special::gamma(1.0 + t.exponent) / special::gamma(1.0 + p), p});
  }
  if (v[0] != 0.0) terms.push_back({v[0] / special::gamma(1.0 + alpha), alpha});
  for (const auto& t : f.leading) {
    const double p = t.exponent + alpha;
    const double c = t.coef * special::gamma(1.0 + t.exponent) / special::gamma(1.0 + p);
    for (std::size_t i = 1; i < x.size(); ++i) out[i] += c * std::pow(x[i] - x[0], p);
  }
  SampledFunction g(x, std::move(out));
  g.leading = std::move(terms);
  return g;
}

namespace {

// Solves the small dense system m x = rhs in place (partial pivoting).
void solve_small(std::vector<double>& m, std::vector<double>& rhs, std::size_t n) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / m[c * n + c];
      for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    double s = rhs[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= m[c * n + k] * rhs[k];
    rhs[c] = s / m[c * n + c];
  }
}

SampledFunction marchaud(double alpha, const std::vector<double>& x, const std::vector<double>& v) {
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("frac_deriv_left: need at least two grid points");
  std::vector<double> out(n, 0.0);

  if (alpha == 1.0) {
    out[0] = (v[1] - v[0]) / (x[1] - x[0]);
    for (std::size_t i = 1; i < n; ++i) out[i] = (v[i] - v[i - 1]) / (x[i] - x[i - 1]);
    return SampledFunction(x, std::move(out));
  }

  // Near the start the functions this operator meets (images of I^alpha)
  // behave like c0 + c1 (y-a)^alpha + c2 (y-a) + c3 (y-a)^(1+alpha), and the
  // piecewise-linear rule is only first order there. Starting weights on the
  // first four nodes make the rule exact on those four powers.
  constexpr std::size_t kBasis = 4;
  const bool corrected = n > kBasis;
  const double powers[kBasis] = {0.0, alpha, 1.0, 1.0 + alpha};
  // Columns: the data, then the two non-polynomial basis functions.
  const std::size_t cols = corrected ? 3 : 1;
  std::vector<double> data(cols * n);
  std::copy(v.begin(), v.end(), data.begin());
  if (corrected) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = x[i] - x[0];
      data[n + i] = std::pow(y, alpha);
      data[2 * n + i] = std::pow(y, 1.0 + alpha);
    }
  }

  const double inv_gamma = 1.0 / special::gamma(1.0 - alpha);
  std::vector<double> raw(cols * n, 0.0);
  std::vector<double> acc(cols);
  for (std::size_t i = 1; i < n; ++i) {
    const double xi = x[i];
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j + 1 < i; ++j) {
      const double a = xi - x[j];
      const double b = xi - x[j + 1];
      const double n0 = (std::pow(b, -alpha) - std::pow(a, -alpha)) / alpha;
      const double n1 = a * n0 - (std::pow(a, 1.0 - alpha) - std::pow(b, 1.0 - alpha)) / (1.0 - alpha);
      for (std::size_t c = 0; c < cols; ++c) {
        const double* d = &data[c * n];
        const double slope = (d[j + 1] - d[j]) / (x[j + 1] - x[j]);
        acc[c] += (d[i] - d[j]) * n0 - slope * n1;
      }
    }
    // Last cell: f(x_i) - f(y) = slope (x_i - y), integrable against z^(-alpha-1).
    const double step = xi - x[i - 1];
    const double last = std::pow(step, 1.0 - alpha) / (1.0 - alpha);
    const double lead = std::pow(xi - x[0], -alpha);
    for (std::size_t c = 0; c < cols; ++c) {
      const double* d = &data[c * n];
      const double slope = (d[i] - d[i - 1]) / step;
      raw[c * n + i] = inv_gamma * (d[i] * lead + alpha * (acc[c] + slope * last));
    }
  }
  std::copy(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(n), out.begin());

  if (corrected) {
    // Work in y / h so the system is O(1); residuals of 1 and y are zero.
    const double h = x[1] - x[0];
    std::vector<double> m(kBasis * kBasis), w(kBasis);
    for (std::size_t i = 1; i < n; ++i) {
      const double y = x[i] - x[0];
      for (std::size_t r = 0; r < kBasis; ++r) {
        for (std::size_t c = 0; c < kBasis; ++c) {
          const double yc = (x[c] - x[0]) / h;
          m[r * kBasis + c] = r == 0 ? 1.0 : std::pow(yc, powers[r]);
        }
      }
      const double exact_a = special::gamma(1.0 + alpha);
      const double exact_b = special::gamma(2.0 + alpha) * y;
      w[0] = 0.0;
      w[1] = (exact_a - raw[n + i]) / std::pow(h, alpha);
      w[2] = 0.0;
      w[3] = (exact_b - raw[2 * n + i]) / std::pow(h, 1.0 + alpha);
      solve_small(m, w, kBasis);
      double corr = 0.0;
      for (std::size_t c = 0; c < kBasis; ++c) corr += w[c] * v[c];
      out[i] += corr;
    }
  }

  if (v[0] == 0.0) {
    out[0] = n >= 3 ? out[1] + (out[1] - out[2]) * (x[1] - x[0]) / (x[2] - x[1]) : out[1];
  } else {
    out[0] = std::copysign(std::numeric_limits<double>::infinity(), v[0]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (std::isnan(out[i])) throw NumericalError("frac_deriv_left: NaN produced", i);
  }
  return SampledFunction(x, std::move(out));
}

}  // namespace

SampledFunction frac_deriv_left(FracOrder order, const SampledFunction& f) {
  require_finite(f, "frac_deriv_left");
  const double alpha = order.value();
  if (alpha == 1.0 || f.leading.empty()) return marchaud(alpha, f.grid, f.values);

  SampledFunction d = marchaud(alpha, f.grid, remainder(f));
  const auto& x = d.grid;
  for (const auto& t : f.leading) {
    // D^alpha y^g = Gamma(1+g) / Gamma(1+g-alpha) y^(g-alpha); g >= 0 > alpha - 1 keeps 1+g-alpha > 0
    const double p = t.exponent - alpha;
    const double c = t.coef * special::gamma(1.0 + t.exponent) / special::gamma(1.0 + p);
    if (c == 0.0) continue;
    for (std::size_t i = 1; i < x.size(); ++i) d.values[i] += c * std::pow(x[i] - x[0], p);
    if (p < 0.0) {
      d.values[0] = std::copysign(std::numeric_limits<double>::infinity(), c);
    } else {
      d.values[0] += p == 0.0 ? c : 0.0;
      d.leading.push_back({c, p});
    }
  }
  return d;
}

namespace {

// Coefficients c[0..i] with sum_m c[m] g(y_m) = I^alpha[y^beta g](y_i) for g
// linear between nodes and y_0 = 0. The power y^beta is integrated exactly
// through incomplete Beta integrals, so no interpolation error comes from it.
void power_weighted_row(const std::vector<double>& y, std::size_t i, double alpha, double beta,
                        double inv_gamma, double* coef) {
  std::fill(coef, coef + i + 1, 0.0);
  const double x = y[i];
  const double s0 = std::pow(x, alpha + beta) * inv_gamma;
  const double s1 = s0 * x;
  for (std::size_t j = 0; j < i; ++j) {
    const double a = y[j];
    const double b = y[j + 1];
    const double z0 = a / x;
    const double z1 = j + 1 == i ? 1.0 : std::min(1.0, b / x);
    const double m0 = s0 * special::incomplete_beta_between(z0, z1, beta + 1.0, alpha);
    const double m1 = s1 * special::incomplete_beta_between(z0, z1, beta + 2.0, alpha);
    const double h = b - a;
    coef[j] += (b * m0 - m1) / h;
    coef[j + 1] += (m1 - a * m0) / h;
  }
}

}  // namespace

SampledFunction kh_inverse_ac(HurstParam h, const SampledFunction& phi_prime) {
  require_finite(phi_prime, "kh_inverse_ac");
  const auto& s = phi_prime.grid;
  const double scale = std::max(1.0, std::abs(s.back()));
  if (std::abs(s.front()) > 1e-14 * scale) throw InvalidArgument("kh_inverse_ac: grid must start at 0");
  const double p = 0.5 - h.value();
  const double inv_gamma = 1.0 / special::gamma(p);
  std::vector<double> y(s);
  y[0] = 0.0;
  std::vector<double> out(s.size(), 0.0), coef(s.size());
  for (std::size_t i = 1; i < s.size(); ++i) {
    power_weighted_row(y, i, p, p, inv_gamma, coef.data());
    double acc = 0.0;
    for (std::size_t m = 0; m <= i; ++m) acc += coef[m] * phi_prime.values[m];
    out[i] = acc * std::pow(y[i], -p);
  }
  return SampledFunction(s, std::move(out));
}

double kh_inverse_normalization(HurstParam h) {
  return 1.0 / (c_h(h) * special::gamma(0.5 + h.value()));
}

UniformKhInverse::UniformKhInverse(HurstParam h, double step, std::size_t cells) : cells_(cells) {
  if (!(step > 0.0)) throw InvalidArgument("UniformKhInverse: step must be positive");
  if (cells > kMaxCells) throw InvalidArgument("UniformKhInverse: too many cells");
  const double p = 0.5 - h.value();
  const double inv_gamma = 1.0 / special::gamma(p);
  std::vector<double> y(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) y[i] = step * static_cast<double>(i);
  coef_.resize((cells + 1) * (cells + 2) / 2, 0.0);
  for (std::size_t i = 1; i <= cells; ++i) {
    double* row = &coef_[i * (i + 1) / 2];
    power_weighted_row(y, i, p, p, inv_gamma, row);
    const double post = std::pow(y[i], -p);
    for (std::size_t m = 0; m <= i; ++m) row[m] *= post;
  }
}

void UniformKhInverse::apply(std::span<const double> phi_prime, std::span<double> out) const {
  if (phi_prime.size() != cells_ + 1 || out.size() != cells_ + 1) {
    throw InvalidArgument("UniformKhInverse::apply: size mismatch");
  }
  out[0] = 0.0;
  for (std::size_t i = 1; i <= cells_; ++i) {
    const double* row = &coef_[i * (i + 1) / 2];
    double acc = 0.0;
    for (std::size_t m = 0; m <= i; ++m) acc += row[m] * phi_prime[m];
    out[i] = acc;
  }
}

UniformFracIntegral::UniformFracIntegral(FracOrder order, double step, std::size_t cells)
    : cells_(cells), left_(cells), right_(cells) {
  if (!(step > 0.0)) throw InvalidArgument("UniformFracIntegral: step must be positive");
  const double alpha = order.value();
  const double scale = std::pow(step, alpha) / special::gamma(alpha);
  for (std::size_t m = 0; m < cells; ++m) {
    const double a = static_cast<double>(m + 1);
    const double b = static_cast<double>(m);
    const double m0 = (std::pow(a, alpha) - std::pow(b, alpha)) / alpha;
    const double m1 = a * m0 - (std::pow(a, alpha + 1.0) - std::pow(b, alpha + 1.0)) / (alpha + 1.0);
    left_[m] = scale * (m0 - m1);
    right_[m] = scale * m1;
  }
}

void UniformFracIntegral::apply(std::span<const double> f, std::span<double> out) const {
  if (f.size() != cells_ + 1 || out.size() != cells_ + 1) {
    throw InvalidArgument("UniformFracIntegral::apply: size mismatch");
  }
  out[0] = 0.0;
  for (std::size_t i = 1; i <= cells_; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < i; ++m) acc += left_[m] * f[i - m - 1] + right_[m] * f[i - m];
    out[i] = acc;
  }
}

namespace {

std::size_t node_index(const std::vector<double>& grid, double t) {
  const double tol = 1e-12 * std::max(1.0, std::abs(grid.back()));
  const auto it = std::lower_bound(grid.begin(), grid.end(), t - tol);
  if (it == grid.end() || std::abs(*it - t) > tol) {
    throw InvalidArgument("shuffle_check: integration limits must be grid nodes");
  }
  return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

ShuffleResult shuffle_check(const SampledFunction& f1, const SampledFunction& f2, double theta,
                            double t) {
  if (f1.grid != f2.grid) throw InvalidArgument("shuffle_check: functions must share a grid");
  require_finite(f1, "shuffle_check");
  require_finite(f2, "shuffle_check");
  if (!(theta < t)) throw InvalidArgument("shuffle_check: requires theta < t");
  const auto& x = f1.grid;
  const std::size_t lo = node_index(x, theta);
  const std::size_t hi = node_index(x, t);

  // F1, F2: running integrals from theta; each cell integral of f_a * F_b is
  // a cubic and Simpson's rule integrates it exactly.
  double big1 = 0.0, big2 = 0.0, rhs = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    const double h = x[k + 1] - x[k];
    const double a0 = f1.values[k], a1 = f1.values[k + 1];
    const double b0 = f2.values[k], b1 = f2.values[k + 1];
    const double big1_mid = big1 + h * (3.0 * a0 + a1) / 8.0;
    const double big2_mid = big2 + h * (3.0 * b0 + b1) / 8.0;
    const double big1_end = big1 + h * (a0 + a1) / 2.0;
    const double big2_end = big2 + h * (b0 + b1) / 2.0;
    const double a_mid = 0.5 * (a0 + a1), b_mid = 0.5 * (b0 + b1);
    rhs += h / 6.0 * (a0 * big2 + 4.0 * a_mid * big2_mid + a1 * big2_end);
    rhs += h / 6.0 * (b0 * big1 + 4.0 * b_mid * big1_mid + b1 * big1_end);
    big1 = big1_end;
    big2 = big2_end;
  }
  return {big1 * big2, rhs};
}

}  // namespace fbel
