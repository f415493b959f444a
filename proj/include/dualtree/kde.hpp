#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "dualtree/bounds.hpp"
#include "dualtree/cover_tree.hpp"
#include "dualtree/kernels.hpp"
#include "dualtree/node_bounds.hpp"
#include "dualtree/traversal.hpp"

namespace dualtree {

enum class KdeMode { absolute, relative };

/// K evaluated at the root-pair distance upper bound: a constant-time
/// lower bound on the kernel value of any (query, reference) pair, used
/// as the relative-mode prune threshold scale.
double kde_kmax(const CoverTree& query_tree, const CoverTree& ref_tree,
                const Kernel& kernel);

// Density-estimation rule set. Base cases accumulate exact per-point
// contributions into f_p; pruned node combinations push the midpoint of
// the kernel bracket times the pruned descendant mass into f_n at the
// scored query node.
//
// Two bookkeeping details keep the estimates exact-once per pair:
//  - a pruned (query node, reference node) combination contributes mass
//    only the first time it is scored as prunable (re-scoring happens in
//    strict-paper query recursions);
//  - the traversal base-cases every reference-set member, so the scored
//    node's own point may already hold the exact kernel term for the
//    pruned node's point; that exact term is swapped out for the node
//    midpoint share, keeping the pair counted exactly once.
class KdeRules {
 public:
  KdeRules(const Dataset& queries, const Dataset& refs,
           const CoverTree& query_tree, Kernel kernel, double epsilon,
           KdeMode mode, double k_max = 1.0);

  double base_case(int q, int r);
  double score(const CoverNode& nq, const CoverNode& nr);

  const std::vector<double>& point_estimates() const { return f_p_; }
  const std::vector<double>& node_estimates() const { return f_n_; }

 private:
  bool delivered(int q, int r) const {
    const size_t bit = static_cast<size_t>(q) * refs_->size() + r;
    return (delivered_[bit >> 6] >> (bit & 63)) & 1u;
  }

  const Dataset* queries_;
  const Dataset* refs_;
  Kernel kernel_;
  double threshold_;  // epsilon, or epsilon * k_max in relative mode
  std::vector<double> f_p_;             // per query point
  std::vector<double> f_n_;             // per query node
  std::vector<std::uint64_t> delivered_;
  std::unordered_set<std::uint64_t> pruned_pairs_;  // (query node, ref node)
};

/// Downward pass summing ancestor node estimates into each query point's
/// estimate; every node is visited once.
std::vector<double> kde_extract(const std::vector<double>& point_estimates,
                                const std::vector<double>& node_estimates,
                                const CoverTree& query_tree);

struct KdeOptions {
  KdeMode mode = KdeMode::absolute;
  double epsilon = 0.1;
  bool strict_paper_mode = false;
  bool audit = false;
  bool with_bounds = false;
  std::ostream* trace = nullptr;
};

struct KdeResult {
  std::vector<double> estimates;
  TraversalCounters counters;
  double k_max = 0.0;  // populated in relative mode
  bool monochromatic = false;
  std::optional<BoundReport> bound;
};

/// Approximate kernel density estimation over prebuilt trees. The bound
/// report plugs the theoretical |R*| = c_r^(4 + ceil(log2 zeta)) next to
/// the measured value.
KdeResult kde_search(const CoverTree& query_tree, const CoverTree& ref_tree,
                     const Kernel& kernel, const KdeOptions& options = {});

KdeResult kde_search(const Dataset& queries, const Dataset& refs,
                     const Kernel& kernel, const KdeOptions& options = {});

}  // namespace dualtree
