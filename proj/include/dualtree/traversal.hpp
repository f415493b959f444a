#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dualtree/cover_tree.hpp"

namespace dualtree {

/// Score value meaning "prune this node combination".
constexpr double kPrune = std::numeric_limits<double>::infinity();

// A rule set plugs a problem into the traversal: base_case acts on a
// (query point, reference point) pair, score decides whether a node
// combination survives (any finite value) or is pruned (kPrune).
template <typename R>
concept RuleSet = requires(R r, int q, int ref, const CoverNode& nq,
                           const CoverNode& nr) {
  { r.base_case(q, ref) };
  { r.score(nq, nr) } -> std::convertible_to<double>;
};

struct TraversalCounters {
  std::int64_t query_recursions = 0;
  std::int64_t reference_recursions = 0;
  std::int64_t ref_recursions_before_first_query = 0;
  std::int64_t ref_recursions_after_last_query = 0;
  std::int64_t base_case_calls = 0;  // delivered pairs (after dedup)
  std::int64_t score_calls = 0;
  std::int64_t prunes = 0;
  std::int64_t max_reference_set_size = 0;  // empirical |R*|
  // Populated when options.audit is set.
  std::int64_t separation_audit_checks = 0;
  std::int64_t separation_audit_violations = 0;
  std::int64_t expansion_conservation_violations = 0;

  std::int64_t total_recursions() const {
    return query_recursions + reference_recursions;
  }
};

struct TraversalOptions {
  // Score query recursions with the parent node, as the traversal is
  // written in its source form, instead of the child being descended into.
  bool strict_paper_mode = false;
  // Skip delivery of pairs with equal point ids (monochromatic self-match).
  bool exclude_self = false;
  // Check the reference-set separation property and the reference
  // expansion bookkeeping at every reference recursion.
  bool audit = false;
  // Iterate children in reverse order; existing answers must not change.
  bool reverse_children = false;
  // Line-delimited JSON event stream.
  std::ostream* trace = nullptr;
};

// The reference working set: nodes pairwise separated by more than
// 2^(s_r_max), per the traversal's separation property.
struct ReferenceSetView {
  std::span<const CoverNode* const> nodes;
  NodeScale s_r_max;
};

struct AuditResult {
  bool ok = true;
  std::string message;
};

/// Exhaustive pairwise separation check of reference-set member points
/// against 2^(s_r_max), with 1e-9 relative tolerance.
AuditResult separation_audit(const ReferenceSetView& r, const Dataset& data);

namespace detail {

class DeliveredPairs {
 public:
  DeliveredPairs(int query_points, int ref_points)
      : cols_(ref_points),
        words_((static_cast<size_t>(query_points) * ref_points + 63) / 64, 0) {}

  bool test(int q, int r) const {
    const size_t bit = static_cast<size_t>(q) * cols_ + r;
    return (words_[bit >> 6] >> (bit & 63)) & 1u;
  }
  void set(int q, int r) {
    const size_t bit = static_cast<size_t>(q) * cols_ + r;
    words_[bit >> 6] |= (std::uint64_t{1} << (bit & 63));
  }

 private:
  size_t cols_;
  std::vector<std::uint64_t> words_;
};

inline NodeScale max_scale(std::span<const CoverNode* const> nodes) {
  NodeScale top = NodeScale::leaf();
  for (const CoverNode* nd : nodes)
    if (top < nd->scale) top = nd->scale;
  return top;
}

inline void trace_scale(std::ostream& out, NodeScale s) {
  if (s.is_leaf())
    out << "null";
  else
    out << s.value();
}

template <RuleSet Rules>
class Traversal {
 public:
  Traversal(const CoverTree& query_tree, const CoverTree& ref_tree,
            Rules& rules, const TraversalOptions& options)
      : query_tree_(query_tree),
        ref_tree_(ref_tree),
        rules_(rules),
        options_(options),
        delivered_(query_tree.dataset->size(), ref_tree.dataset->size()) {}

  TraversalCounters run() {
    std::vector<const CoverNode*> refs{ref_tree_.root};
    recurse(query_tree_.root, refs);
    counters_.ref_recursions_after_last_query =
        counters_.reference_recursions - ref_recursions_at_last_query_;
    return counters_;
  }

 private:
  void deliver(int q, int r) {
    if (options_.exclude_self && q == r) return;
    if (delivered_.test(q, r)) return;
    delivered_.set(q, r);
    ++counters_.base_case_calls;
    if (options_.trace)
      *options_.trace << "{\"event\":\"base_case\",\"q\":" << q
                      << ",\"r\":" << r << "}\n";
    rules_.base_case(q, r);
  }

  bool keep(const CoverNode* scored_query, const CoverNode* ref) {
    ++counters_.score_calls;
    const double score = rules_.score(*scored_query, *ref);
    if (score == kPrune) {
      ++counters_.prunes;
      if (options_.trace) {
        *options_.trace << "{\"event\":\"prune\",\"q_node\":"
                        << scored_query->node_id
                        << ",\"r_node\":" << ref->node_id << ",\"s_q\":";
        trace_scale(*options_.trace, scored_query->scale);
        *options_.trace << ",\"s_r\":";
        trace_scale(*options_.trace, ref->scale);
        *options_.trace << "}\n";
      }
      return false;
    }
    return true;
  }

  void recurse(const CoverNode* nq, std::vector<const CoverNode*>& refs) {
    if (refs.empty()) return;
    counters_.max_reference_set_size =
        std::max(counters_.max_reference_set_size,
                 static_cast<std::int64_t>(refs.size()));
    const NodeScale s_r_max = max_scale(refs);

    if (nq->scale < s_r_max) {
      reference_recursion(nq, refs, s_r_max);
    } else if (!nq->is_leaf()) {
      query_recursion(nq, refs);
    } else {
      // Query leaf against an all-leaf reference set: final base cases.
      ++counters_.reference_recursions;
      if (!seen_query_recursion_) ++counters_.ref_recursions_before_first_query;
      for (const CoverNode* nr : refs) deliver(nq->point_id, nr->point_id);
    }
  }

  void reference_recursion(const CoverNode* nq,
                           std::vector<const CoverNode*>& refs,
                           NodeScale s_r_max) {
    ++counters_.reference_recursions;
    if (!seen_query_recursion_) ++counters_.ref_recursions_before_first_query;
    if (options_.trace) {
      *options_.trace << "{\"event\":\"reference_recursion\",\"s_q\":";
      trace_scale(*options_.trace, nq->scale);
      *options_.trace << ",\"s_r_max\":";
      trace_scale(*options_.trace, s_r_max);
      *options_.trace << ",\"r_size\":" << refs.size() << "}\n";
    }
    if (options_.audit) {
      ++counters_.separation_audit_checks;
      const AuditResult audit =
          separation_audit({refs, s_r_max}, *ref_tree_.dataset);
      if (!audit.ok) ++counters_.separation_audit_violations;
    }

    for (const CoverNode* nr : refs) deliver(nq->point_id, nr->point_id);

    std::vector<const CoverNode*> expanded;
    expanded.reserve(refs.size());
    for (const CoverNode* nr : refs) {
      if (nr->scale == s_r_max) {
        for (const CoverNode* c : nr->children) expanded.push_back(c);
      } else {
        expanded.push_back(nr);
      }
    }
    if (options_.audit) check_expansion(refs, expanded, s_r_max);

    std::vector<const CoverNode*> filtered;
    filtered.reserve(expanded.size());
    for (const CoverNode* nr : expanded)
      if (keep(nq, nr)) filtered.push_back(nr);
    recurse(nq, filtered);
  }

  void query_recursion(const CoverNode* nq,
                       std::vector<const CoverNode*>& refs) {
    ++counters_.query_recursions;
    seen_query_recursion_ = true;
    ref_recursions_at_last_query_ = counters_.reference_recursions;
    if (options_.trace) {
      *options_.trace << "{\"event\":\"query_recursion\",\"s_q\":";
      trace_scale(*options_.trace, nq->scale);
      *options_.trace << ",\"r_size\":" << refs.size() << "}\n";
    }
    const auto& children = nq->children;
    const size_t count = children.size();
    for (size_t i = 0; i < count; ++i) {
      const CoverNode* child =
          children[options_.reverse_children ? count - 1 - i : i];
      const CoverNode* scored = options_.strict_paper_mode ? nq : child;
      std::vector<const CoverNode*> filtered;
      filtered.reserve(refs.size());
      for (const CoverNode* nr : refs)
        if (keep(scored, nr)) filtered.push_back(nr);
      recurse(child, filtered);
    }
  }

  // Independent reconstruction of the reference-expansion bookkeeping:
  // the expanded set must equal {children of max-scale nodes} plus the
  // untouched lower-scale members.
  void check_expansion(std::span<const CoverNode* const> before,
                       std::span<const CoverNode* const> after,
                       NodeScale s_r_max) {
    std::vector<const CoverNode*> expected;
    for (const CoverNode* nr : before)
      if (!(nr->scale == s_r_max)) expected.push_back(nr);
    for (const CoverNode* nr : before)
      if (nr->scale == s_r_max)
        for (const CoverNode* c : nr->children) expected.push_back(c);
    std::vector<const CoverNode*> lhs(after.begin(), after.end());
    std::sort(lhs.begin(), lhs.end());
    std::sort(expected.begin(), expected.end());
    if (lhs != expected) ++counters_.expansion_conservation_violations;
  }

  const CoverTree& query_tree_;
  const CoverTree& ref_tree_;
  Rules& rules_;
  TraversalOptions options_;
  DeliveredPairs delivered_;
  TraversalCounters counters_;
  bool seen_query_recursion_ = false;
  std::int64_t ref_recursions_at_last_query_ = 0;
};

}  // namespace detail

// The pruning dual-tree traversal: starts with the query root against the
// reference root, performs a reference recursion while the reference set
// reaches above the query scale (base cases for the whole set, expansion
// of its top-scale members, score filtering), a query recursion otherwise,
// and delivers the final base cases once both sides are leaves. Base-case
// delivery is at-most-once per (query point, reference point) pair.
template <RuleSet Rules>
TraversalCounters dual_traverse(const CoverTree& query_tree,
                                const CoverTree& ref_tree, Rules& rules,
                                const TraversalOptions& options = {}) {
  detail::Traversal<Rules> traversal(query_tree, ref_tree, rules, options);
  return traversal.run();
}

}  // namespace dualtree
