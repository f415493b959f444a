#include "dualtree/kde.hpp"

#include <cmath>
#include <stdexcept>

#include "dualtree/brute_force.hpp"

namespace dualtree {

double kde_kmax(const CoverTree& query_tree, const CoverTree& ref_tree,
                const Kernel& kernel) {
  const double d = node_dmax(*query_tree.root, *ref_tree.root,
                             *query_tree.dataset, *ref_tree.dataset);
  return kernel_value(kernel, d);
}

KdeRules::KdeRules(const Dataset& queries, const Dataset& refs,
                   const CoverTree& query_tree, Kernel kernel, double epsilon,
                   KdeMode mode, double k_max)
    : queries_(&queries),
      refs_(&refs),
      kernel_(kernel),
      threshold_(mode == KdeMode::absolute ? epsilon : epsilon * k_max),
      f_p_(queries.size(), 0.0),
      f_n_(query_tree.node_count, 0.0),
      delivered_((static_cast<size_t>(queries.size()) * refs.size() + 63) / 64,
                 0) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("kde: epsilon must be positive");
}

double KdeRules::base_case(int q, int r) {
  const double k =
      kernel_value(kernel_, distance(queries_->point(q), refs_->point(r)));
  f_p_[q] += static_cast<double>(refs_->weight(r)) * k;
  const size_t bit = static_cast<size_t>(q) * refs_->size() + r;
  delivered_[bit >> 6] |= (std::uint64_t{1} << (bit & 63));
  return k;
}

double KdeRules::score(const CoverNode& nq, const CoverNode& nr) {
  const double d =
      distance(queries_->point(nq.point_id), refs_->point(nr.point_id));
  const double k_hi = kernel_value(kernel_, node_dmin(d, nq, nr));
  const double k_lo = kernel_value(kernel_, node_dmax(d, nq, nr));
  const double gap = k_hi - k_lo;
  if (gap < threshold_) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(nq.node_id) << 32) |
        static_cast<std::uint32_t>(nr.node_id);
    if (pruned_pairs_.insert(key).second) {
      f_n_[nq.node_id] +=
          static_cast<double>(nr.descendant_count) * 0.5 * (k_hi + k_lo);
      // The reference node's own point may already be in f_p for this
      // node's point via an earlier base case; replace that exact term
      // with the midpoint share the node estimate just added for it.
      if (delivered(nq.point_id, nr.point_id))
        f_p_[nq.point_id] -=
            static_cast<double>(refs_->weight(nr.point_id)) *
            kernel_value(kernel_, d);
    }
    return kPrune;
  }
  return gap;
}

std::vector<double> kde_extract(const std::vector<double>& point_estimates,
                                const std::vector<double>& node_estimates,
                                const CoverTree& query_tree) {
  std::vector<double> out(query_tree.dataset->size(), 0.0);
  struct Frame {
    const CoverNode* node;
    double above;
  };
  std::vector<Frame> stack{{query_tree.root, 0.0}};
  while (!stack.empty()) {
    auto [nd, above] = stack.back();
    stack.pop_back();
    const double here = above + node_estimates[nd->node_id];
    if (nd->is_leaf())
      out[nd->point_id] = point_estimates[nd->point_id] + here;
    else
      for (const CoverNode* c : nd->children) stack.push_back({c, here});
  }
  return out;
}

KdeResult kde_search(const CoverTree& query_tree, const CoverTree& ref_tree,
                     const Kernel& kernel, const KdeOptions& options) {
  const Dataset& queries = *query_tree.dataset;
  const Dataset& refs = *ref_tree.dataset;
  if (refs.size() == 0)
    throw std::invalid_argument("kde_search: empty reference set");

  KdeResult res;
  res.monochromatic = query_tree.dataset == ref_tree.dataset;
  if (options.mode == KdeMode::relative)
    res.k_max = kde_kmax(query_tree, ref_tree, kernel);

  KdeRules rules(queries, refs, query_tree, kernel, options.epsilon,
                 options.mode, res.k_max);
  TraversalOptions topt;
  topt.strict_paper_mode = options.strict_paper_mode;
  topt.audit = options.audit;
  topt.trace = options.trace;
  res.counters = dual_traverse(query_tree, ref_tree, rules, topt);
  res.estimates =
      kde_extract(rules.point_estimates(), rules.node_estimates(), query_tree);

  if (options.with_bounds) {
    const double c_r = expansion_constant(refs).c;
    const double z = zeta(kernel, options.epsilon);
    const double r_star_theory =
        std::pow(c_r, 4.0 + std::ceil(std::log2(z)));
    double theta = 0.0;
    if (!res.monochromatic && queries.size() >= 2 && refs.size() >= 2)
      theta = theta_estimate(dataset_extremes(queries), dataset_extremes(refs),
                             refs.size());
    BoundReport rep = runtime_bound_report(
        res.counters, c_r, tree_imbalance(query_tree).total, theta,
        RStarPolicy::measured, refs.size(), r_star_theory, res.monochromatic);
    res.bound = rep;
  }
  return res;
}

KdeResult kde_search(const Dataset& queries, const Dataset& refs,
                     const Kernel& kernel, const KdeOptions& options) {
  if (refs.size() == 0)
    throw std::invalid_argument("kde_search: empty reference set");
  if (&queries == &refs) {
    const CoverTree tree = build_cover_tree(queries);
    return kde_search(tree, tree, kernel, options);
  }
  const CoverTree query_tree = build_cover_tree(queries);
  const CoverTree ref_tree = build_cover_tree(refs);
  return kde_search(query_tree, ref_tree, kernel, options);
}

}  // namespace dualtree
