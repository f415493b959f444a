#include <doctest.h>

#include <random>

#include "dualtree/brute_force.hpp"
#include "dualtree/generators.hpp"
#include "dualtree/neighbors.hpp"
#include "dualtree/node_bounds.hpp"
#include "support.hpp"

using namespace dualtree;
using dualtree::testing::make_dataset;
using dualtree::testing::random_cube;

TEST_CASE("node distance bounds at leaves and the clamp") {
  const auto s = make_dataset({0.0, 1.0, 10.0}, 1);
  const auto t = build_cover_tree(s);
  const CoverNode* leaf0 = nullptr;
  const CoverNode* leaf2 = nullptr;
  for (const CoverNode& nd : t.arena) {
    if (!nd.is_leaf()) continue;
    if (nd.point_id == 0) leaf0 = &nd;
    if (nd.point_id == 2) leaf2 = &nd;
  }
  REQUIRE(leaf0);
  REQUIRE(leaf2);
  CHECK(node_dmin(*leaf0, *leaf2, s, s) == doctest::Approx(10.0));
  CHECK(node_dmax(*leaf0, *leaf2, s, s) == doctest::Approx(10.0));
  // Overlapping balls clamp the lower bound at zero.
  CHECK(node_dmin(*t.root, *t.root, s, s) == 0.0);
}

TEST_CASE("node bounds sandwich every descendant pair distance") {
  std::mt19937_64 rng(9);
  const auto qs = random_cube(150, 3, 51);
  const auto rs = random_cube(170, 3, 52);
  const auto qt = build_cover_tree(qs);
  const auto rt = build_cover_tree(rs);
  std::uniform_int_distribution<int> pick_q(0, qt.node_count - 1);
  std::uniform_int_distribution<int> pick_r(0, rt.node_count - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const CoverNode& nq = qt.node(pick_q(rng));
    const CoverNode& nr = rt.node(pick_r(rng));
    const double dmin = node_dmin(nq, nr, qs, rs);
    const double dmax = node_dmax(nq, nr, qs, rs);
    double true_min = 1e300, true_max = 0.0;
    for (int qi = nq.leaf_begin; qi < nq.leaf_end; ++qi) {
      for (int ri = nr.leaf_begin; ri < nr.leaf_end; ++ri) {
        const double d = distance(qs.point(qt.leaf_order[qi]),
                                  rs.point(rt.leaf_order[ri]));
        true_min = std::min(true_min, d);
        true_max = std::max(true_max, d);
      }
    }
    CHECK(dmin <= true_min + 1e-12);
    CHECK(dmax >= true_max - 1e-12);
    CHECK(dmax - dmin <= 2.0 * (nq.lambda + nr.lambda) + 1e-12);
  }
}

TEST_CASE("base case keeps the closer candidate") {
  const auto qs = make_dataset({0.0}, 1);
  const auto rs = make_dataset({3.0, 1.0}, 1);
  NnRules rules(qs, rs);
  CHECK(rules.base_case(0, 0) == doctest::Approx(3.0));
  CHECK(rules.candidate_neighbors()[0] == 0);
  rules.base_case(0, 1);
  CHECK(rules.candidate_neighbors()[0] == 1);
  CHECK(rules.candidate_distances()[0] == doctest::Approx(1.0));
  rules.base_case(0, 0);  // farther again: no change
  CHECK(rules.candidate_neighbors()[0] == 1);
}

TEST_CASE("score never prunes at infinite candidate distance") {
  const auto qs = make_dataset({0.0, 100.0}, 1);
  const auto rs = make_dataset({0.0, 200.0}, 1);
  const auto qt = build_cover_tree(qs);
  const auto rt = build_cover_tree(rs);
  NnRules rules(qs, rs);
  CHECK(rules.score(*qt.root, *rt.root) != kPrune);
}

TEST_CASE("leaf-vs-leaf prunes when the pair cannot improve") {
  const auto qs = make_dataset({0.0, 64.0}, 1);
  const auto rs = make_dataset({1.0, 5.0, 70.0}, 1);
  const auto qt = build_cover_tree(qs);
  const auto rt = build_cover_tree(rs);
  NnRules rules(qs, rs);
  rules.base_case(0, 0);  // candidate at distance 1
  const CoverNode* q_leaf = nullptr;
  const CoverNode* r_leaf = nullptr;
  for (const CoverNode& nd : qt.arena)
    if (nd.is_leaf() && nd.point_id == 0) q_leaf = &nd;
  for (const CoverNode& nd : rt.arena)
    if (nd.is_leaf() && nd.point_id == 1) r_leaf = &nd;
  REQUIRE(q_leaf);
  REQUIRE(r_leaf);
  CHECK(rules.score(*q_leaf, *r_leaf) == kPrune);
}

TEST_CASE("query coinciding with a reference point finds distance zero") {
  const auto qs = make_dataset({5.0, 9.0}, 1);
  const auto rs = make_dataset({5.0, 7.0, 12.0}, 1);
  const auto res = nn_search(qs, rs);
  CHECK(res.answers[0].neighbor == 0);
  CHECK(res.answers[0].dist == 0.0);
}

TEST_CASE("dual-tree neighbors equal brute force") {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<int> sizes(30, 220);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + (trial % 3) * 2;
    const auto refs = random_cube(sizes(rng), d, 1000 + trial);
    const auto queries = random_cube(sizes(rng), d, 2000 + trial);
    const auto res = nn_search(queries, refs);
    const auto oracle = brute_force_nn(queries, refs, false);
    for (int q = 0; q < queries.size(); ++q)
      CHECK(res.answers[q].dist ==
            doctest::Approx(oracle[q].dist).epsilon(1e-12));
  }
}

TEST_CASE("monochromatic all-neighbors equal brute force with self excluded") {
  for (std::uint64_t seed : {6u, 7u}) {
    const auto s = generate_dataset("uniform-ball:N=180,d=3", seed);
    NnOptions opt;
    opt.exclude_self = true;
    const auto res = nn_search(s, s, opt);
    const auto oracle = brute_force_nn(s, s, true);
    for (int q = 0; q < s.size(); ++q) {
      CHECK(res.answers[q].dist ==
            doctest::Approx(oracle[q].dist).epsilon(1e-12));
      CHECK(res.answers[q].dist > 0.0);
    }
  }
}

TEST_CASE("pruning never changes answers against a never-prune run") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    const auto refs = random_cube(120, 4, seed);
    const auto queries = random_cube(90, 4, seed + 100);
    NnOptions pruned;
    NnOptions exhaustive;
    exhaustive.never_prune = true;
    const auto a = nn_search(queries, refs, pruned);
    const auto b = nn_search(queries, refs, exhaustive);
    for (int q = 0; q < queries.size(); ++q)
      CHECK(a.answers[q].dist == doctest::Approx(b.answers[q].dist));
    CHECK(a.counters.prunes > 0);
    CHECK(b.counters.prunes == 0);
  }
}

TEST_CASE("empty reference set is an error") {
  const auto qs = make_dataset({0.0}, 1);
  const Dataset empty(std::vector<double>{}, 1);
  CHECK_THROWS_AS((void)nn_search(qs, empty), std::invalid_argument);
}

TEST_CASE("monochromatic reference-set peak stays under c_qr^5") {
  const auto s = generate_dataset("uniform-ball:N=250,d=3", 55);
  NnOptions opt;
  opt.exclude_self = true;
  opt.with_bounds = true;
  const auto res = nn_search(s, s, opt);
  REQUIRE(res.bound.has_value());
  REQUIRE(res.bound->r_star_theoretical.has_value());
  CHECK(static_cast<double>(res.counters.max_reference_set_size) <=
        *res.bound->r_star_theoretical);
  CHECK(res.bound->c_qr == res.bound->c_r);  // monochromatic
}
