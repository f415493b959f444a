#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "dualtree/dataset.hpp"

namespace dualtree {

// Integer scale with an out-of-band leaf marker that compares below every
// integer. Leaves conceptually sit at scale negative infinity.
class NodeScale {
 public:
  constexpr NodeScale() = default;
  static constexpr NodeScale leaf() { return NodeScale(); }
  static constexpr NodeScale at(int s) {
    NodeScale v;
    v.leaf_ = false;
    v.value_ = s;
    return v;
  }

  constexpr bool is_leaf() const { return leaf_; }
  int value() const;  // throws on leaf

  friend constexpr bool operator==(NodeScale a, NodeScale b) {
    return a.leaf_ == b.leaf_ && (a.leaf_ || a.value_ == b.value_);
  }
  friend constexpr bool operator<(NodeScale a, NodeScale b) {
    if (a.leaf_) return !b.leaf_;
    if (b.leaf_) return false;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(NodeScale a, NodeScale b) {
    return a < b || a == b;
  }
  friend constexpr bool operator>(NodeScale a, NodeScale b) { return b < a; }
  friend constexpr bool operator>=(NodeScale a, NodeScale b) { return b <= a; }

  std::string to_string() const;

 private:
  bool leaf_ = true;
  int value_ = 0;
};

struct CoverNode {
  int point_id = -1;
  NodeScale scale;         // leaf() for leaves
  double lambda = 0.0;     // 2^(scale+1); 0 for leaves
  std::int64_t descendant_count = 0;  // multiplicity-weighted points in subtree
  int node_id = -1;        // dense index into the tree arena
  CoverNode* parent = nullptr;
  std::vector<CoverNode*> children;  // self-chain child first, then entrants
  int leaf_begin = 0, leaf_end = 0;  // range into CoverTree::leaf_order

  bool is_leaf() const { return scale.is_leaf(); }
};

struct BuildConfig {
  int root_point = 0;
  int scale_base = 2;  // the only supported base
};

class CoverTree {
 public:
  const Dataset* dataset = nullptr;
  CoverNode* root = nullptr;
  NodeScale s_top;  // scale of the root (leaf() for a single-point tree)
  NodeScale s_min;  // smallest non-leaf scale (leaf() if none)
  int node_count = 0;
  int leaf_count = 0;
  std::deque<CoverNode> arena;   // node_id-indexed storage
  std::vector<int> leaf_order;   // point ids of leaves in DFS order

  const CoverNode& node(int id) const { return arena[id]; }
  CoverNode& node(int id) { return arena[id]; }

  /// Highest node scale of each point (leaf() if the point only has a leaf).
  std::vector<NodeScale> max_point_scales() const;

  /// Point ids at level s: every point whose top scale is >= s.
  std::vector<int> level_points(int s) const;
};

/// Batch-builds a cover tree over the dataset.
CoverTree build_cover_tree(const Dataset& s, BuildConfig config = {});

struct InvariantViolation {
  std::string kind;     // e.g. "covering", "separation", "leaf-uniqueness"
  std::string message;  // human-readable detail naming the nodes involved
};

struct VerificationReport {
  bool passed = true;
  std::vector<InvariantViolation> violations;
  int checks_run = 0;
};

// Structural audit: nesting/self-chains, covering, separation,
// lambda containment, leaf uniqueness, internal degree >= 2,
// node_count <= 2N-1, descendant-count consistency, child-scale ordering.
// Strict inequalities use a 1e-9 relative tolerance.
VerificationReport verify_invariants(const CoverTree& tree);

/// Missing levels between a node and its parent; leaves clamp at zero.
int node_imbalance(const CoverNode& n, NodeScale parent_scale,
                   NodeScale s_min);

struct ImbalanceReport {
  std::int64_t total = 0;
  std::int64_t internal_contribution = 0;
  std::int64_t leaf_contribution = 0;
  std::vector<int> per_node;  // indexed by node_id
};

/// Tree imbalance: the per-node sum, computed in one pass.
ImbalanceReport tree_imbalance(const CoverTree& tree);

struct TreeStats {
  int node_count = 0;
  int max_children = 0;
  int max_depth = 0;
  NodeScale s_top;
  NodeScale s_min;
  int leaf_count = 0;
  // Present when an expansion constant is supplied: the c^4 width bound
  // and the c^2 log2(N) depth comparator.
  std::optional<double> width_bound;
  std::optional<double> depth_comparator;
};

TreeStats tree_stats(const CoverTree& tree,
                     std::optional<double> expansion_c = {});

struct PackingCheck {
  int count = 0;       // |B_S(p, rho * 2^s) intersect C_s|
  double bound = 0.0;  // c^(2 + ceil(log2 rho))
  bool ok = false;
};

/// Packing bound check at level s of the tree with ball radius rho * 2^s.
PackingCheck level_packing_check(const CoverTree& tree,
                                 std::span<const double> p, double rho, int s,
                                 double expansion_c);

/// Versioned JSON document (point_id, scale, children nested).
std::string tree_to_json(const CoverTree& tree, int indent = -1);

}  // namespace dualtree
