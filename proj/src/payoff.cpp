#include "fbel/payoff.hpp"

#include <algorithm>
#include <sstream>

#include "fbel/error.hpp"

namespace fbel {

Payoff Payoff::custom(std::function<double(double)> f, std::string name) {
  if (!f) throw InvalidArgument("custom payoff needs a function");
  Payoff p(Kind::custom, 0.0);
  p.custom_ = std::move(f);
  p.name_ = std::move(name);
  return p;
}

Payoff Payoff::parse(std::string_view name, double strike) {
  if (name == "identity") return identity();
  if (name == "call") return call(strike);
  if (name == "put") return put(strike);
  if (name == "digital") return digital(strike);
  throw InvalidArgument("unknown payoff '" + std::string(name) + "' (identity, call, put, digital)");
}

double Payoff::operator()(double z) const {
  switch (kind_) {
    case Kind::identity: return z;
    case Kind::call: return std::max(z - strike_, 0.0);
    case Kind::put: return std::max(strike_ - z, 0.0);
    case Kind::digital: return z > strike_ ? 1.0 : 0.0;
    case Kind::custom: return custom_(z);
  }
  return 0.0;
}

double Payoff::operator()(std::span<const double> x) const {
  double z = 0.0;
  for (double v : x) z += v;
  return (*this)(z);
}

std::string Payoff::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::identity: os << "identity"; break;
    case Kind::call: os << "call:" << strike_; break;
    case Kind::put: os << "put:" << strike_; break;
    case Kind::digital: os << "digital:" << strike_; break;
    case Kind::custom: os << "custom:" << name_; break;
  }
  return os.str();
}

}  // namespace fbel
