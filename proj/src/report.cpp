#include "fbel/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fbel/error.hpp"

namespace fbel {

ResultRow estimate_row(std::string quantity, std::string component, double estimate,
                       std::optional<double> std_error, std::size_t n_paths) {
  ResultRow r;
  r.quantity = std::move(quantity);
  r.component = std::move(component);
  r.estimate = estimate;
  r.std_error = std_error;
  r.n_paths = n_paths;
  return r;
}

ResultRow compare_row(std::string quantity, std::string component, double estimate,
                      std::optional<double> std_error, std::size_t n_paths, double target, double tolerance) {
  ResultRow r = estimate_row(std::move(quantity), std::move(component), estimate, std_error, n_paths);
  r.target = target;
  r.tolerance = tolerance;
  r.pass = std::isfinite(estimate) && std::abs(estimate - target) <= tolerance;
  return r;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "quantity,component,estimate,stderr,n_paths,target,tolerance,pass\n";
  for (const ResultRow& r : rows) {
    out << r.quantity << ',' << r.component << ',' << num(r.estimate) << ',';
    if (r.std_error) out << num(*r.std_error);
    out << ',' << r.n_paths << ',';
    if (r.target) out << num(*r.target);
    out << ',';
    if (r.tolerance) out << num(*r.tolerance);
    out << ',';
    if (r.pass) out << (*r.pass ? "true" : "false");
    out << '\n';
  }
  if (!out) throw IoError("failed writing results CSV");
}

bool all_pass(std::span<const ResultRow> rows) {
  for (const ResultRow& r : rows) {
    if (r.pass && !*r.pass) return false;
  }
  return true;
}

}  // namespace fbel
