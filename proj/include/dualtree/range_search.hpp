#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dualtree/bounds.hpp"
#include "dualtree/cover_tree.hpp"
#include "dualtree/node_bounds.hpp"
#include "dualtree/traversal.hpp"

namespace dualtree {

// Range-search rule set over a closed interval [lower, upper]. The
// corrected score keeps a combination whenever [d_min, d_max] intersects
// the range; the strict variant reproduces the keep-only-if-an-endpoint-
// falls-inside rule, which wrongly prunes combinations whose bounds
// straddle the whole range.
class RangeRules {
 public:
  RangeRules(const Dataset& queries, const Dataset& refs, double lower,
             double upper, bool count_only = false, bool strict_score = false);

  double base_case(int q, int r);
  double score(const CoverNode& nq, const CoverNode& nr) const;

  const std::vector<std::vector<int>>& results() const { return results_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  const Dataset* queries_;
  const Dataset* refs_;
  double lower_, upper_;
  bool count_only_, strict_;
  std::vector<std::vector<int>> results_;
  std::vector<std::int64_t> counts_;
};

struct RangeDifficulty {
  std::int64_t s_max_size = 0;  // max over queries of |S[p_q]|
  double alpha = 0.0;
  std::int64_t c = 0;  // max over queries of |S^alpha[p_q] \ S[p_q]|
  int beta = 0;        // ceil(log2(1 + 1/alpha))
};

/// Brute-force range difficulty statistics for the alpha-expanded range.
RangeDifficulty alpha_expansion_stats(const Dataset& queries,
                                      const Dataset& refs, double lower,
                                      double upper, double alpha);

struct RangeOptions {
  bool count_only = false;
  bool strict_paper_score = false;  // demonstrably incomplete; test-only
  bool strict_paper_mode = false;   // query-recursion scoring node choice
  bool audit = false;
  bool with_bounds = false;
  double alpha = 1.0 / 3.0;  // expansion parameter for the bound report
  std::ostream* trace = nullptr;
};

struct RangeResult {
  std::vector<std::vector<int>> results;  // sorted ids per query
  std::vector<std::int64_t> counts;
  TraversalCounters counters;
  bool monochromatic = false;
  std::optional<RangeDifficulty> difficulty;
  std::optional<BoundReport> bound;
  // Corollary form c_r^(8+beta) * (N + i_t + theta), reported when
  // |S_max| + C <= c_r^(4+beta).
  std::optional<double> corollary_value;
};

RangeResult range_search(const CoverTree& query_tree,
                         const CoverTree& ref_tree, double lower, double upper,
                         const RangeOptions& options = {});

RangeResult range_search(const Dataset& queries, const Dataset& refs,
                         double lower, double upper,
                         const RangeOptions& options = {});

}  // namespace dualtree
