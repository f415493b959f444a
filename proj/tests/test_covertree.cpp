#include <doctest.h>

#include <cmath>
#include <random>

#include "dualtree/cover_tree.hpp"
#include "dualtree/generators.hpp"
#include "support.hpp"
#include "tree_builder.hpp"

using namespace dualtree;
using dualtree::testing::make_dataset;
using dualtree::testing::random_cube;
using dualtree::testing::TreeBuilder;

TEST_CASE("single point: one leaf, no imbalance") {
  const auto s = make_dataset({42.0}, 1);
  const auto t = build_cover_tree(s);
  CHECK(t.node_count == 1);
  CHECK(t.root->is_leaf());
  CHECK(tree_imbalance(t).total == 0);
  const auto st = tree_stats(t);
  CHECK(st.node_count == 1);
  CHECK(st.max_children == 0);
  CHECK(st.max_depth == 0);
  CHECK(st.s_top.is_leaf());
  CHECK(st.s_min.is_leaf());
  CHECK(st.leaf_count == 1);
  CHECK(verify_invariants(t).passed);
}

TEST_CASE("two points at distance one: root scale zero, two leaf children") {
  const auto s = make_dataset({0.0, 1.0}, 1);
  const auto t = build_cover_tree(s);
  REQUIRE(!t.root->is_leaf());
  CHECK(t.root->scale.value() == 0);
  REQUIRE(t.root->children.size() == 2);
  CHECK(t.root->children[0]->is_leaf());
  CHECK(t.root->children[1]->is_leaf());
  CHECK(verify_invariants(t).passed);
}

TEST_CASE("generated datasets build invariant-clean trees") {
  const std::vector<std::string> specs = {
      "uniform-ball:N=200,d=2",
      "uniform-ball:N=500,d=5",
      "gaussian-mixture:N=300,d=3,k=4",
      "grid:N=64,d=2",
      "outlier-chain:N=150,d=2,num_outliers=3,spacing_factor=10",
  };
  for (const auto& spec : specs) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto s = generate_dataset(spec, seed);
      const auto t = build_cover_tree(s);
      const auto rep = verify_invariants(t);
      if (!rep.passed)
        for (const auto& v : rep.violations)
          MESSAGE(spec, " seed ", seed, ": ", v.kind, ": ", v.message);
      CHECK(rep.passed);
      CHECK(t.leaf_count == s.size());
      CHECK(t.node_count <= 2 * s.size() - 1);
    }
  }
}

TEST_CASE("root scale sits in the eta bracket") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const auto s = generate_dataset("uniform-ball:N=120,d=3", seed);
    const auto t = build_cover_tree(s);
    const double eta = dataset_extremes(s).eta;
    const int hi = static_cast<int>(std::ceil(std::log2(eta)));
    CHECK(t.s_top.value() >= hi - 1);
    CHECK(t.s_top.value() <= hi);
  }
}

TEST_CASE("adding a far outlier never lowers the top scale") {
  const auto base = generate_dataset("uniform-ball:N=80,d=2", 9);
  const auto t0 = build_cover_tree(base);
  std::vector<double> coords = base.coords();
  coords.push_back(500.0);
  coords.push_back(0.0);
  const auto grown = make_dataset(std::move(coords), 2);
  const auto t1 = build_cover_tree(grown);
  CHECK(t1.s_top.value() >= t0.s_top.value());
}

TEST_CASE("fault injection: covering violation is reported") {
  const auto s = make_dataset({0.0, 1000.0}, 1);
  TreeBuilder b(s);
  auto t = b.finish(b.internal(0, 0, {b.leaf(0), b.leaf(1)}));
  const auto rep = verify_invariants(t);
  CHECK(!rep.passed);
  bool covering = false;
  for (const auto& v : rep.violations) covering |= v.kind == "covering";
  CHECK(covering);
}

TEST_CASE("fault injection: duplicated leaf point is reported") {
  const auto s = make_dataset({0.0, 1.0, 3.0}, 1);
  TreeBuilder b(s);
  auto t = b.finish(b.internal(
      0, 2, {b.leaf(0), b.internal(1, 0, {b.leaf(1), b.leaf(1)})}));
  const auto rep = verify_invariants(t);
  CHECK(!rep.passed);
  bool uniq = false;
  for (const auto& v : rep.violations) uniq |= v.kind == "leaf-uniqueness";
  CHECK(uniq);
}

TEST_CASE("node imbalance cases") {
  // Children exactly one level down contribute nothing; two levels down
  // contribute one missing level each; leaves clamp at zero.
  const auto s = make_dataset({0.0, 3.3, 3.9, -3.3, -3.9}, 1);
  TreeBuilder b(s);
  auto t = b.finish(b.internal(
      0, 2,
      {b.leaf(0), b.internal(1, 0, {b.leaf(1), b.leaf(2)}),
       b.internal(3, 0, {b.leaf(3), b.leaf(4)})}));
  REQUIRE(verify_invariants(t).passed);
  CHECK(t.s_min == NodeScale::at(0));

  const auto& n1 = *t.root->children[1];
  const auto& n3 = *t.root->children[2];
  CHECK(node_imbalance(n1, t.root->scale, t.s_min) == 1);
  CHECK(node_imbalance(n3, t.root->scale, t.s_min) == 1);
  CHECK(node_imbalance(*t.root, NodeScale::leaf(), t.s_min) == 0);
  // Leaf with parent at s_min: max(-1, 0).
  CHECK(node_imbalance(*n1.children[0], n1.scale, t.s_min) == 0);

  const auto imb = tree_imbalance(t);
  CHECK(imb.internal_contribution == 2);
  CHECK(imb.total >= 2);
  CHECK(imb.total ==
        imb.internal_contribution + imb.leaf_contribution);
}

TEST_CASE("perfectly level-by-level tree has zero imbalance") {
  // Root at scale 1, children at scale 0, all leaves at s_min parents.
  const auto s = make_dataset({0.0, 3.0, 1.2, 4.2}, 1);
  TreeBuilder b(s);
  auto t = b.finish(b.internal(
      0, 2,
      {b.internal(0, 1, {b.leaf(0), b.leaf(2)}),
       b.internal(1, 1, {b.leaf(1), b.leaf(3)})}));
  REQUIRE(verify_invariants(t).passed);
  CHECK(tree_imbalance(t).total == 0);
}

TEST_CASE("chain tree imbalance grows like N times the scale span") {
  const int levels = 14;  // internal chain nodes at scales levels..1
  std::vector<double> coords;
  double x = 0.0;
  coords.push_back(x);
  for (int i = 1; i <= levels; ++i) {
    x += 1.5 * std::ldexp(1.0, levels - i);
    coords.push_back(x);
  }
  const auto s = make_dataset(std::move(coords), 1);
  TreeBuilder b(s);
  CoverNode* tail = b.leaf(levels);
  for (int i = levels - 1; i >= 0; --i)
    tail = b.internal(i, levels - i, {b.leaf(i), tail});
  auto t = b.finish(tail);
  REQUIRE(verify_invariants(t).passed);

  const auto imb = tree_imbalance(t);
  const double n = s.size();
  const double span = t.s_top.value() - t.s_min.value();
  CHECK(imb.total > 0.25 * n * span);
  CHECK(imb.total <= 1.0 * n * span);
}

TEST_CASE("imbalance per-node sum equals independent edge-gap accounting") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const auto s = generate_dataset("gaussian-mixture:N=250,d=3,k=3", seed);
    const auto t = build_cover_tree(s);
    const auto imb = tree_imbalance(t);
    // Edge-wise oracle: walk edges from the arena, not the recursion.
    std::int64_t edge_sum = 0;
    for (const CoverNode& nd : t.arena) {
      if (nd.parent == nullptr) continue;
      const int sp = nd.parent->scale.value();
      if (nd.is_leaf())
        edge_sum += std::max(sp - t.s_min.value() - 1, 0);
      else
        edge_sum += sp - nd.scale.value() - 1;
    }
    CHECK(imb.total == edge_sum);
  }
}

TEST_CASE("outlier chain imbalance exceeds uniform ball imbalance") {
  const auto chain = generate_dataset(
      "outlier-chain:N=100,d=2,num_outliers=3,spacing_factor=10", 7);
  const auto ball = generate_dataset("uniform-ball:N=100,d=2", 7);
  const auto it_chain = tree_imbalance(build_cover_tree(chain)).total;
  const auto it_ball = tree_imbalance(build_cover_tree(ball)).total;
  CHECK(it_chain > it_ball);
}

TEST_CASE("tree stats against the width bound") {
  const auto s = generate_dataset("uniform-ball:N=500,d=3", 21);
  const auto t = build_cover_tree(s);
  const double c = expansion_constant(s).c;
  const auto st = tree_stats(t, c);
  CHECK(st.leaf_count == s.size());
  REQUIRE(st.width_bound.has_value());
  CHECK(st.max_children <= *st.width_bound);
  CHECK(st.max_depth >= 1);
}

TEST_CASE("level packing checks") {
  const auto s = generate_dataset("uniform-ball:N=300,d=2", 31);
  const auto t = build_cover_tree(s);
  const double c = expansion_constant(s).c;

  // Empty-ball branch: a faraway center with a small radius.
  std::vector<double> far{1e6, 1e6};
  const auto empty = level_packing_check(t, far, 2.0, t.s_min.value(), c);
  CHECK(empty.count == 0);
  CHECK(empty.ok);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, s.size() - 1);
  std::vector<int> scales;
  for (const CoverNode& nd : t.arena)
    if (!nd.is_leaf()) scales.push_back(nd.scale.value());
  std::uniform_int_distribution<size_t> pick_scale(0, scales.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    for (double rho : {2.0, 4.0, 8.0}) {
      const auto pc = level_packing_check(t, s.point(pick(rng)), rho,
                                          scales[pick_scale(rng)], c);
      CHECK(pc.ok);
    }
  }

  // rho = 8 at the root scale mirrors the c^5 packing instantiation.
  const auto pc = level_packing_check(t, s.point(0), 8.0, t.s_top.value(), c);
  CHECK(pc.bound == doctest::Approx(std::pow(c, 5.0)));
  CHECK(pc.ok);
}

TEST_CASE("tree JSON carries version, ids and nested children") {
  const auto s = make_dataset({0.0, 1.0}, 1);
  const auto t = build_cover_tree(s);
  const auto j = tree_to_json(t);
  CHECK(j.find("\"format_version\":1") != std::string::npos);
  CHECK(j.find("\"point_id\"") != std::string::npos);
  CHECK(j.find("\"children\"") != std::string::npos);
}

TEST_CASE("weighted duplicates feed descendant counts") {
  const auto s =
      make_dataset({0.0, 0.0, 1.0, 5.0}, 1, DuplicatePolicy::weighted);
  REQUIRE(s.size() == 3);
  REQUIRE(s.weight(0) == 2);
  const auto t = build_cover_tree(s);
  CHECK(verify_invariants(t).passed);
  CHECK(t.root->descendant_count == 4);  // multiplicity-weighted
}
