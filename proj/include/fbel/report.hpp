#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace fbel {

/// One line of a results file. Comparison rows pass when
/// |estimate - target| <= tolerance.
struct ResultRow {
  std::string quantity;
  std::string component;
  double estimate = 0.0;
  std::optional<double> std_error;
  std::size_t n_paths = 0;
  std::optional<double> target;
  std::optional<double> tolerance;
  std::optional<bool> pass;
};

ResultRow estimate_row(std::string quantity, std::string component, double estimate,
                       std::optional<double> std_error, std::size_t n_paths);
ResultRow compare_row(std::string quantity, std::string component, double estimate,
                      std::optional<double> std_error, std::size_t n_paths, double target, double tolerance);

/// Header quantity,component,estimate,stderr,n_paths,target,tolerance,pass;
/// numbers at full precision, absent fields empty.
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);

bool all_pass(std::span<const ResultRow> rows);

}  // namespace fbel
