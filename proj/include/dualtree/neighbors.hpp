#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "dualtree/bounds.hpp"
#include "dualtree/brute_force.hpp"
#include "dualtree/cover_tree.hpp"
#include "dualtree/node_bounds.hpp"
#include "dualtree/traversal.hpp"

namespace dualtree {

// Nearest-neighbor rule set. The candidate distance list D starts at
// infinity; base cases tighten it, and a node combination is pruned when
// its distance lower bound cannot beat B(Nq) = D[p_q] + lambda_q.
class NnRules {
 public:
  NnRules(const Dataset& queries, const Dataset& refs)
      : queries_(&queries),
        refs_(&refs),
        dist_(queries.size(), std::numeric_limits<double>::infinity()),
        neighbor_(queries.size(), -1) {}

  double base_case(int q, int r) {
    const double d = distance(queries_->point(q), refs_->point(r));
    if (d < dist_[q]) {
      dist_[q] = d;
      neighbor_[q] = r;
    }
    return d;
  }

  double score(const CoverNode& nq, const CoverNode& nr) const {
    const double dmin = node_dmin(nq, nr, *queries_, *refs_);
    const double bound = dist_[nq.point_id] + nq.lambda;
    if (dmin >= bound) return kPrune;
    return dmin;
  }

  const std::vector<double>& candidate_distances() const { return dist_; }
  const std::vector<int>& candidate_neighbors() const { return neighbor_; }

  std::vector<NeighborAnswer> answers() const {
    std::vector<NeighborAnswer> out(dist_.size());
    for (size_t i = 0; i < dist_.size(); ++i)
      out[i] = {neighbor_[i], dist_[i]};
    return out;
  }

 private:
  const Dataset* queries_;
  const Dataset* refs_;
  std::vector<double> dist_;
  std::vector<int> neighbor_;
};

struct NnOptions {
  bool exclude_self = false;  // skip p_q == p_r in monochromatic runs
  bool strict_paper_mode = false;
  bool audit = false;
  bool never_prune = false;  // exhaustive reference retention (oracle mode)
  bool with_bounds = false;  // expansion constants + bound report
  std::ostream* trace = nullptr;
};

struct NnResult {
  std::vector<NeighborAnswer> answers;
  TraversalCounters counters;
  bool monochromatic = false;
  std::optional<BoundReport> bound;
};

// Exact 1-nearest-neighbor search over prebuilt trees. The monochromatic
// case is detected by tree identity; its bound report uses c_qr = c_r and
// drops theta. The theoretical |R*| plugged alongside the measurement is
// c_qr^5.
NnResult nn_search(const CoverTree& query_tree, const CoverTree& ref_tree,
                   const NnOptions& options = {});

/// Convenience: builds trees, then searches. Monochromatic when
/// &queries == &refs.
NnResult nn_search(const Dataset& queries, const Dataset& refs,
                   const NnOptions& options = {});

}  // namespace dualtree
