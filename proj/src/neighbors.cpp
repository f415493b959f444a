#include "dualtree/neighbors.hpp"

#include <cmath>
#include <stdexcept>

namespace dualtree {
namespace {

// Disables pruning while keeping base-case behavior; used to realize the
// prune-soundness checks and exhaustive oracle runs.
struct NoPrune {
  NnRules* inner;
  void base_case(int q, int r) { inner->base_case(q, r); }
  double score(const CoverNode&, const CoverNode&) const { return 0.0; }
};

}  // namespace

NnResult nn_search(const CoverTree& query_tree, const CoverTree& ref_tree,
                   const NnOptions& options) {
  const Dataset& queries = *query_tree.dataset;
  const Dataset& refs = *ref_tree.dataset;
  if (refs.size() == 0)
    throw std::invalid_argument("nn_search: empty reference set");

  NnResult res;
  res.monochromatic = query_tree.dataset == ref_tree.dataset;
  if (options.exclude_self && !res.monochromatic)
    throw std::invalid_argument(
        "nn_search: exclude_self requires a monochromatic run");

  NnRules rules(queries, refs);
  TraversalOptions topt;
  topt.strict_paper_mode = options.strict_paper_mode;
  topt.exclude_self = options.exclude_self;
  topt.audit = options.audit;
  topt.trace = options.trace;
  if (options.never_prune) {
    NoPrune wrapper{&rules};
    res.counters = dual_traverse(query_tree, ref_tree, wrapper, topt);
  } else {
    res.counters = dual_traverse(query_tree, ref_tree, rules, topt);
  }
  res.answers = rules.answers();

  if (options.with_bounds) {
    const double c_r = expansion_constant(refs).c;
    double c_qr = c_r;
    if (!res.monochromatic) {
      // c_qr takes the worst expansion constant of S_r with one query
      // point adjoined; exact, so quadratic in the reference size per
      // query point.
      for (int q = 0; q < queries.size(); ++q)
        c_qr = std::max(c_qr, expansion_constant(refs, queries.point(q)).c);
    }
    double theta = 0.0;
    if (!res.monochromatic && queries.size() >= 2 && refs.size() >= 2)
      theta = theta_estimate(dataset_extremes(queries), dataset_extremes(refs),
                             refs.size());
    BoundReport rep = runtime_bound_report(
        res.counters, c_r, tree_imbalance(query_tree).total, theta,
        RStarPolicy::measured, refs.size(), std::pow(c_qr, 5.0),
        res.monochromatic);
    rep.c_qr = c_qr;
    res.bound = rep;
  }
  return res;
}

NnResult nn_search(const Dataset& queries, const Dataset& refs,
                   const NnOptions& options) {
  if (refs.size() == 0)
    throw std::invalid_argument("nn_search: empty reference set");
  if (&queries == &refs) {
    const CoverTree tree = build_cover_tree(queries);
    return nn_search(tree, tree, options);
  }
  const CoverTree query_tree = build_cover_tree(queries);
  const CoverTree ref_tree = build_cover_tree(refs);
  return nn_search(query_tree, ref_tree, options);
}

}  // namespace dualtree
