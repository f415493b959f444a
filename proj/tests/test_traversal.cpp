#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "dualtree/bounds.hpp"
#include "dualtree/generators.hpp"
#include "dualtree/neighbors.hpp"
#include "dualtree/traversal.hpp"
#include "support.hpp"

using namespace dualtree;
using dualtree::testing::make_dataset;
using dualtree::testing::random_cube;

namespace {

struct CountingRules {
  std::map<std::pair<int, int>, int> delivered;
  double score_value = 0.0;  // kPrune to prune everything

  void base_case(int q, int r) { ++delivered[{q, r}]; }
  double score(const CoverNode&, const CoverNode&) const {
    return score_value;
  }
};

}  // namespace

TEST_CASE("prune-everything traversal delivers only the root pair") {
  // Query set with tiny extent, reference set with wide extent, so the
  // first recursion is a reference recursion.
  const auto queries = make_dataset({0.0, 0.5}, 1);
  const auto refs = make_dataset({0.0, 64.0}, 1);
  const auto qt = build_cover_tree(queries);
  const auto rt = build_cover_tree(refs);
  REQUIRE(qt.s_top < rt.s_top);

  CountingRules rules;
  rules.score_value = kPrune;
  const auto counters = dual_traverse(qt, rt, rules);
  CHECK(counters.base_case_calls == 1);
  CHECK(rules.delivered.size() == 1);
  CHECK(counters.query_recursions == 0);
  CHECK(counters.max_reference_set_size == 1);
}

TEST_CASE("never-prune monochromatic traversal delivers every pair once") {
  const auto s = generate_dataset("uniform-ball:N=32,d=2", 3);
  const auto t = build_cover_tree(s);
  CountingRules rules;
  const auto counters = dual_traverse(t, t, rules);
  CHECK(counters.base_case_calls == 32 * 32);
  CHECK(rules.delivered.size() == 32u * 32u);
  for (const auto& [pair, count] : rules.delivered) CHECK(count == 1);
}

TEST_CASE("never-prune bichromatic traversal is exhaustive") {
  const auto queries = random_cube(23, 3, 41);
  const auto refs = random_cube(17, 3, 42);
  const auto qt = build_cover_tree(queries);
  const auto rt = build_cover_tree(refs);
  CountingRules rules;
  const auto counters = dual_traverse(qt, rt, rules);
  CHECK(counters.base_case_calls == 23 * 17);
  CHECK(rules.delivered.size() == 23u * 17u);
}

TEST_CASE("self-exclusion skips exactly the diagonal") {
  const auto s = generate_dataset("uniform-ball:N=20,d=2", 8);
  const auto t = build_cover_tree(s);
  CountingRules rules;
  TraversalOptions opt;
  opt.exclude_self = true;
  const auto counters = dual_traverse(t, t, rules, opt);
  CHECK(counters.base_case_calls == 20 * 19);
  for (const auto& [pair, count] : rules.delivered) {
    CHECK(pair.first != pair.second);
    CHECK(count == 1);
  }
}

TEST_CASE("pruning NN traversal still delivers pairs at most once") {
  const auto s = generate_dataset("uniform-ball:N=150,d=3", 14);
  const auto t = build_cover_tree(s);
  NnRules inner(s, s);
  struct Wrapper {
    NnRules* inner;
    std::map<std::pair<int, int>, int>* delivered;
    void base_case(int q, int r) {
      ++(*delivered)[{q, r}];
      inner->base_case(q, r);
    }
    double score(const CoverNode& a, const CoverNode& b) const {
      return inner->score(a, b);
    }
  };
  std::map<std::pair<int, int>, int> delivered;
  Wrapper rules{&inner, &delivered};
  dual_traverse(t, t, rules);
  for (const auto& [pair, count] : delivered) CHECK(count == 1);
}

TEST_CASE("separation audit and expansion conservation hold during search") {
  const auto s = generate_dataset("uniform-ball:N=256,d=3", 77);
  NnOptions opt;
  opt.exclude_self = true;
  opt.audit = true;
  const auto res = nn_search(s, s, opt);
  CHECK(res.counters.separation_audit_checks > 0);
  CHECK(res.counters.separation_audit_violations == 0);
  CHECK(res.counters.expansion_conservation_violations == 0);
  CHECK(res.counters.max_reference_set_size >= 1);
  CHECK(res.counters.reference_recursions >=
        res.counters.ref_recursions_before_first_query +
            res.counters.ref_recursions_after_last_query);
}

TEST_CASE("separation audit is vacuous on singleton sets") {
  const auto s = make_dataset({0.0, 1.0}, 1);
  const auto t = build_cover_tree(s);
  const CoverNode* root = t.root;
  AuditResult res = separation_audit({{&root, 1}, root->scale}, s);
  CHECK(res.ok);
}

TEST_CASE("trace stream emits line-delimited events") {
  const auto s = generate_dataset("uniform-ball:N=10,d=2", 5);
  const auto t = build_cover_tree(s);
  CountingRules rules;
  std::ostringstream trace;
  TraversalOptions opt;
  opt.trace = &trace;
  dual_traverse(t, t, rules, opt);
  const std::string text = trace.str();
  CHECK(text.find("\"event\":\"reference_recursion\"") != std::string::npos);
  CHECK(text.find("\"event\":\"query_recursion\"") != std::string::npos);
  CHECK(text.find("\"event\":\"base_case\"") != std::string::npos);
}

TEST_CASE("theta estimate") {
  DatasetExtremes q{.eta = 10.0, .delta = 1.0};
  DatasetExtremes r{.eta = 10.0, .delta = 1.0};
  CHECK(theta_estimate(q, r, 100) == 0.0);

  r.delta = 0.25;  // delta_q = 4 * delta_r
  CHECK(theta_estimate(q, r, 100) == doctest::Approx(200.0));

  // Query deltas below reference deltas clamp to zero.
  r.delta = 4.0;
  CHECK(theta_estimate(q, r, 100) == 0.0);
}

TEST_CASE("pre-recursion estimate") {
  DatasetExtremes q{.eta = 8.0, .delta = 1.0};
  DatasetExtremes r{.eta = 8.0, .delta = 1.0};
  CHECK(pre_recursion_estimate(q, r, 50) == 0.0);
  r.eta = 64.0;  // eta_r = 8 * eta_q
  CHECK(pre_recursion_estimate(q, r, 50) == doctest::Approx(2.0));
}

TEST_CASE("measured pre-query recursions against the surrogate") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto queries = random_cube(40, 3, seed * 10, 1.0);
    const auto refs = random_cube(60, 3, seed * 10 + 1, 30.0);
    const auto qt = build_cover_tree(queries);
    const auto rt = build_cover_tree(refs);
    NnRules rules(queries, refs);
    const auto counters = dual_traverse(qt, rt, rules);
    const double estimate = pre_recursion_estimate(
        dataset_extremes(queries), dataset_extremes(refs), refs.size());
    CHECK(counters.ref_recursions_before_first_query <=
          std::max(estimate, static_cast<double>(rt.node_count)));
  }
}

TEST_CASE("runtime bound report arithmetic") {
  TraversalCounters counters;
  counters.max_reference_set_size = 1;
  const auto rep = runtime_bound_report(counters, 2.0, 0, 0.0,
                                        RStarPolicy::measured, 10);
  CHECK(rep.formula_value == doctest::Approx(160.0));
  CHECK(rep.formula_text.find("160") != std::string::npos);
  CHECK(rep.formula_text.find("surrogate") != std::string::npos);
}

TEST_CASE("monochromatic bound report drops theta") {
  TraversalCounters counters;
  counters.max_reference_set_size = 2;
  const auto rep = runtime_bound_report(counters, 2.0, 5, 123.0,
                                        RStarPolicy::measured, 10, {}, true);
  CHECK(rep.theta == 0.0);
  CHECK(rep.formula_value == doctest::Approx(16.0 * 2.0 * 15.0));
  CHECK(rep.formula_text.find("theta") == std::string::npos);

  const auto bi = runtime_bound_report(counters, 2.0, 5, 123.0,
                                       RStarPolicy::measured, 10, {}, false);
  CHECK(bi.theta == 123.0);
  CHECK(bi.formula_text.find("theta") != std::string::npos);
}

TEST_CASE("measured recursions sit under the evaluated bound") {
  const auto s = generate_dataset("uniform-ball:N=250,d=3", 19);
  NnOptions opt;
  opt.exclude_self = true;
  opt.with_bounds = true;
  const auto res = nn_search(s, s, opt);
  REQUIRE(res.bound.has_value());
  CHECK(static_cast<double>(res.counters.total_recursions()) <=
        res.bound->formula_value);
}
