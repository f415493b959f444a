#include "dualtree/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dualtree {

double theta_estimate(const DatasetExtremes& query_extremes,
                      const DatasetExtremes& ref_extremes, std::int64_t n) {
  const double ratio = query_extremes.delta / ref_extremes.delta;
  const double levels = std::log2(ratio);
  const double nn = static_cast<double>(n);
  return std::max(std::min(nn * levels, nn * nn), 0.0);
}

double pre_recursion_estimate(const DatasetExtremes& query_extremes,
                              const DatasetExtremes& ref_extremes,
                              std::int64_t n) {
  const double levels = std::log2(ref_extremes.eta / query_extremes.eta) - 1.0;
  return std::max(std::min(static_cast<double>(n), levels), 0.0);
}

BoundReport runtime_bound_report(const TraversalCounters& counters, double c_r,
                                 std::int64_t i_t_query, double theta,
                                 RStarPolicy policy, std::int64_t n,
                                 std::optional<double> supplied_r_star,
                                 bool monochromatic) {
  BoundReport rep;
  rep.c_r = c_r;
  rep.i_t_query = i_t_query;
  rep.theta = monochromatic ? 0.0 : theta;
  rep.monochromatic = monochromatic;
  rep.r_star_policy = policy;
  rep.r_star_measured = counters.max_reference_set_size;
  rep.r_star_theoretical = supplied_r_star;
  if (policy == RStarPolicy::supplied) {
    if (!supplied_r_star)
      throw std::invalid_argument(
          "runtime_bound_report: supplied policy needs a value");
    rep.r_star = *supplied_r_star;
  } else {
    rep.r_star = static_cast<double>(rep.r_star_measured);
  }

  const double work = static_cast<double>(n) +
                      static_cast<double>(i_t_query) + rep.theta;
  rep.formula_value =
      std::pow(c_r, 4.0) * rep.r_star * rep.chi * rep.psi * work;

  std::ostringstream text;
  text << "c_r^4 * |R*| * chi * psi * (N + i_t(T_q)";
  if (!monochromatic) text << " + theta";
  text << ") = " << std::pow(c_r, 4.0) << " * " << rep.r_star << " * "
       << rep.chi << " * " << rep.psi << " * (" << n << " + " << i_t_query;
  if (!monochromatic) text << " + " << rep.theta;
  text << ") = " << rep.formula_value << " [surrogate constants]";
  rep.formula_text = text.str();
  return rep;
}

}  // namespace dualtree
