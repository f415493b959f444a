#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dualtree/dataset.hpp"
#include "dualtree/traversal.hpp"

namespace dualtree {

// Surrogate (constant factors taken as 1) for the extra reference
// recursions after the last query recursion:
//   max(min(N * log2(delta_q / delta_r), N^2), 0).
double theta_estimate(const DatasetExtremes& query_extremes,
                      const DatasetExtremes& ref_extremes, std::int64_t n);

// Surrogate for the extra reference recursions before the first query
// recursion: min(N, log2(eta_r / eta_q) - 1), clamped at zero.
double pre_recursion_estimate(const DatasetExtremes& query_extremes,
                              const DatasetExtremes& ref_extremes,
                              std::int64_t n);

enum class RStarPolicy { measured, supplied };

// Evaluated right-hand side of the general runtime expression
// c_r^4 * |R*| * chi * psi * (N + i_t(T_q) + theta), with chi = psi = 1
// for the shipped rule sets. Monochromatic reports drop the theta term.
struct BoundReport {
  double c_r = 0.0;
  std::optional<double> c_qr;
  std::int64_t i_t_query = 0;
  double theta = 0.0;
  bool monochromatic = false;
  double chi = 1.0;
  double psi = 1.0;
  double r_star = 0.0;  // value plugged into the formula
  RStarPolicy r_star_policy = RStarPolicy::measured;
  std::int64_t r_star_measured = 0;             // empirical max |R|
  std::optional<double> r_star_theoretical;     // problem-specific bound
  double formula_value = 0.0;
  std::string formula_text;  // human-readable instantiation
};

BoundReport runtime_bound_report(const TraversalCounters& counters, double c_r,
                                 std::int64_t i_t_query, double theta,
                                 RStarPolicy policy, std::int64_t n,
                                 std::optional<double> supplied_r_star = {},
                                 bool monochromatic = false);

}  // namespace dualtree
