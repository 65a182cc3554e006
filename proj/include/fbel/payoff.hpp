#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace fbel {

/// Closed registry of terminal payoffs plus an escape hatch for tests. In d
/// dimensions the payoff is applied to the sum of the coordinates.
class Payoff {
 public:
  enum class Kind { identity, call, put, digital, custom };

  static Payoff identity() { return Payoff(Kind::identity, 0.0); }
  static Payoff call(double strike) { return Payoff(Kind::call, strike); }
  static Payoff put(double strike) { return Payoff(Kind::put, strike); }
  static Payoff digital(double strike) { return Payoff(Kind::digital, strike); }
  static Payoff custom(std::function<double(double)> f, std::string name);
  /// "identity", "call", "put" or "digital".
  static Payoff parse(std::string_view name, double strike);

  double operator()(double z) const;
  double operator()(std::span<const double> x) const;

  Kind kind() const noexcept { return kind_; }
  double strike() const noexcept { return strike_; }
  std::string describe() const;

 private:
  Payoff(Kind kind, double strike) : kind_(kind), strike_(strike) {}

  Kind kind_;
  double strike_;
  std::function<double(double)> custom_;
  std::string name_;
};

}  // namespace fbel
