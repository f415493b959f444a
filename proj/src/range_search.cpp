#include "dualtree/range_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualtree {

RangeRules::RangeRules(const Dataset& queries, const Dataset& refs,
                       double lower, double upper, bool count_only,
                       bool strict_score)
    : queries_(&queries),
      refs_(&refs),
      lower_(lower),
      upper_(upper),
      count_only_(count_only),
      strict_(strict_score),
      results_(count_only ? 0 : queries.size()),
      counts_(queries.size(), 0) {
  if (lower > upper)
    throw std::invalid_argument("range: lower bound exceeds upper bound");
  if (lower < 0.0)
    throw std::invalid_argument("range: lower bound must be nonnegative");
}

double RangeRules::base_case(int q, int r) {
  const double d = distance(queries_->point(q), refs_->point(r));
  if (d >= lower_ && d <= upper_) {
    ++counts_[q];
    if (!count_only_) results_[q].push_back(r);
  }
  return d;
}

double RangeRules::score(const CoverNode& nq, const CoverNode& nr) const {
  const double d =
      distance(queries_->point(nq.point_id), refs_->point(nr.point_id));
  const double dmin = node_dmin(d, nq, nr);
  const double dmax = node_dmax(d, nq, nr);
  bool keep;
  if (strict_) {
    keep = (dmin >= lower_ && dmin <= upper_) ||
           (dmax >= lower_ && dmax <= upper_);
  } else {
    keep = dmin <= upper_ && dmax >= lower_;
  }
  return keep ? dmin : kPrune;
}

RangeDifficulty alpha_expansion_stats(const Dataset& queries,
                                      const Dataset& refs, double lower,
                                      double upper, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("alpha_expansion_stats: alpha must be > 0");
  RangeDifficulty out;
  out.alpha = alpha;
  out.beta = static_cast<int>(std::ceil(std::log2(1.0 + 1.0 / alpha)));
  const double lo = (1.0 - alpha) * lower;
  const double hi = (1.0 + alpha) * upper;
  for (int q = 0; q < queries.size(); ++q) {
    std::int64_t in_range = 0, in_expansion_only = 0;
    for (int r = 0; r < refs.size(); ++r) {
      const double d = distance(queries.point(q), refs.point(r));
      if (d >= lower && d <= upper)
        ++in_range;
      else if (d >= lo && d <= hi)
        ++in_expansion_only;
    }
    out.s_max_size = std::max(out.s_max_size, in_range);
    out.c = std::max(out.c, in_expansion_only);
  }
  return out;
}

RangeResult range_search(const CoverTree& query_tree,
                         const CoverTree& ref_tree, double lower, double upper,
                         const RangeOptions& options) {
  const Dataset& queries = *query_tree.dataset;
  const Dataset& refs = *ref_tree.dataset;
  if (refs.size() == 0)
    throw std::invalid_argument("range_search: empty reference set");

  RangeRules rules(queries, refs, lower, upper, options.count_only,
                   options.strict_paper_score);
  TraversalOptions topt;
  topt.strict_paper_mode = options.strict_paper_mode;
  topt.audit = options.audit;
  topt.trace = options.trace;

  RangeResult res;
  res.monochromatic = query_tree.dataset == ref_tree.dataset;
  res.counters = dual_traverse(query_tree, ref_tree, rules, topt);
  res.counts = rules.counts();
  if (!options.count_only) {
    res.results = rules.results();
    for (auto& ids : res.results) std::sort(ids.begin(), ids.end());
  }

  if (options.with_bounds) {
    const double c_r = expansion_constant(refs).c;
    res.difficulty =
        alpha_expansion_stats(queries, refs, lower, upper, options.alpha);
    const double packing = std::pow(c_r, 4.0 + res.difficulty->beta);
    const double population =
        static_cast<double>(res.difficulty->s_max_size + res.difficulty->c);
    const double r_star_theory = std::max(packing, population);
    double theta = 0.0;
    if (!res.monochromatic && queries.size() >= 2 && refs.size() >= 2)
      theta = theta_estimate(dataset_extremes(queries), dataset_extremes(refs),
                             refs.size());
    const std::int64_t i_t = tree_imbalance(query_tree).total;
    res.bound = runtime_bound_report(res.counters, c_r, i_t, theta,
                                     RStarPolicy::measured, refs.size(),
                                     r_star_theory, res.monochromatic);
    if (population <= packing) {
      const double work = static_cast<double>(refs.size()) +
                          static_cast<double>(i_t) +
                          (res.monochromatic ? 0.0 : theta);
      res.corollary_value = std::pow(c_r, 8.0 + res.difficulty->beta) * work;
    }
  }
  return res;
}

RangeResult range_search(const Dataset& queries, const Dataset& refs,
                         double lower, double upper,
                         const RangeOptions& options) {
  if (refs.size() == 0)
    throw std::invalid_argument("range_search: empty reference set");
  if (&queries == &refs) {
    const CoverTree tree = build_cover_tree(queries);
    return range_search(tree, tree, lower, upper, options);
  }
  const CoverTree query_tree = build_cover_tree(queries);
  const CoverTree ref_tree = build_cover_tree(refs);
  return range_search(query_tree, ref_tree, lower, upper, options);
}

}  // namespace dualtree
