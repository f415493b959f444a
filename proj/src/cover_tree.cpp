#include "dualtree/cover_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace dualtree {

int NodeScale::value() const {
  if (leaf_) throw std::logic_error("NodeScale: value() called on a leaf");
  return value_;
}

std::string NodeScale::to_string() const {
  return leaf_ ? "leaf" : std::to_string(value_);
}

namespace {

constexpr double kRelTol = 1e-9;

double pow2(int s) { return std::ldexp(1.0, s); }

// Smallest integer t with 2^t >= d, for d > 0.
int ceil_log2(double d) {
  const int e = std::ilogb(d);  // 2^e <= d < 2^(e+1)
  return pow2(e) >= d ? e : e + 1;
}

// Batch construction. Each frame (pivot p, level t) must consume every
// pending point within 2^t of p and may consume lent points out to
// 2^(t+1); unconsumed lent points flow back to the caller. The lending is
// what keeps close pairs in one branch, which the separation invariant
// needs. Frames only record ownership; the explicit nodes are emitted
// afterwards, one chain node per level at which a point acquires entrant
// children.
class Builder {
 public:
  explicit Builder(const Dataset& data)
      : data_(data), kids_(data.size()) {}

  CoverTree run(const BuildConfig& config) {
    const int n = data_.size();
    if (n == 0) throw std::invalid_argument("build: empty dataset");
    const int root = config.root_point;
    if (root < 0 || root >= n)
      throw std::invalid_argument("build: root point out of range");
    if (config.scale_base != 2)
      throw std::invalid_argument("build: only scale base 2 is supported");

    std::vector<Item> near;
    near.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
      if (i == root) continue;
      const double d = data_.dist(root, i);
      if (d == 0.0)
        throw std::invalid_argument("build: duplicate points " +
                                    std::to_string(std::min(root, i)) + " and " +
                                    std::to_string(std::max(root, i)));
      near.push_back({i, d});
    }
    construct(root, std::move(near), {});

    CoverTree tree;
    tree.dataset = &data_;
    tree.root = emit_point(tree, root);
    finalize(tree, tree.root, nullptr);
    tree.node_count = static_cast<int>(tree.arena.size());
    tree.leaf_count = static_cast<int>(tree.leaf_order.size());
    tree.s_top = tree.root->scale;
    tree.s_min = NodeScale::leaf();
    for (const CoverNode& nd : tree.arena)
      if (!nd.is_leaf() && (tree.s_min.is_leaf() || nd.scale < tree.s_min))
        tree.s_min = nd.scale;
    return tree;
  }

 private:
  struct Item {
    int id;
    double dist;  // to the current frame pivot
  };
  struct KidEntry {
    int point;
    int frame;  // level whose chain node adopts this entrant
  };

  // near: mandate points with cached distances to p. far: lent points.
  // Returns unconsumed lent ids.
  std::vector<int> construct(int p, std::vector<Item> near,
                             std::vector<Item> far) {
    if (near.empty()) {
      std::vector<int> back(far.size());
      for (size_t i = 0; i < far.size(); ++i) back[i] = far[i].id;
      return back;
    }
    double maxd = 0.0;
    for (const Item& it : near) maxd = std::max(maxd, it.dist);
    if (maxd <= 0.0)
      throw std::invalid_argument("build: duplicate points " +
                                  std::to_string(std::min(p, near.front().id)) +
                                  " and " +
                                  std::to_string(std::max(p, near.front().id)));
    const int t = ceil_log2(maxd);
    const double mandate = pow2(t), half = pow2(t - 1), rights = pow2(t + 1);

    std::vector<int> returned;
    std::vector<Item> pool;
    for (const Item& it : far) {
      if (it.dist <= rights)
        pool.push_back(it);
      else
        returned.push_back(it.id);
    }

    std::vector<Item> nlo, nhi;
    for (const Item& it : near)
      (it.dist <= half ? nlo : nhi).push_back(it);

    // Self subtree: consumes nlo, borrows nhi; its leftovers join the pool.
    for (int id : construct(p, std::move(nlo), nhi))
      pool.push_back({id, data_.dist(p, id)});

    while (true) {
      int pick = -1;
      for (size_t i = 0; i < pool.size(); ++i)
        if (pool[i].dist <= mandate &&
            (pick < 0 || pool[i].id < pool[pick].id))
          pick = static_cast<int>(i);
      if (pick < 0) break;
      const int q = pool[pick].id;
      pool.erase(pool.begin() + pick);
      std::vector<Item> qn, qf;
      std::vector<Item> rest;
      for (const Item& it : pool) {
        const double dq = data_.dist(q, it.id);
        if (dq <= half)
          qn.push_back({it.id, dq});
        else if (dq <= mandate)
          qf.push_back({it.id, dq});
        else
          rest.push_back(it);
      }
      kids_[p].push_back({q, t});
      std::vector<int> unused = construct(q, std::move(qn), std::move(qf));
      pool = std::move(rest);
      for (int id : unused) pool.push_back({id, data_.dist(p, id)});
    }
    for (const Item& it : pool) returned.push_back(it.id);
    return returned;
  }

  CoverNode* make_node(CoverTree& tree, int point, NodeScale scale) {
    tree.arena.push_back({});
    CoverNode* nd = &tree.arena.back();
    nd->point_id = point;
    nd->scale = scale;
    nd->lambda = scale.is_leaf() ? 0.0 : pow2(scale.value() + 1);
    nd->node_id = static_cast<int>(tree.arena.size()) - 1;
    return nd;
  }

  CoverNode* emit_point(CoverTree& tree, int p) {
    auto& entries = kids_[p];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const KidEntry& a, const KidEntry& b) {
                       return a.frame > b.frame;
                     });
    return emit_chain(tree, p, entries.data(),
                      entries.data() + entries.size());
  }

  CoverNode* emit_chain(CoverTree& tree, int p, const KidEntry* begin,
                        const KidEntry* end) {
    if (begin == end) return make_node(tree, p, NodeScale::leaf());
    const int t = begin->frame;
    const KidEntry* split = begin;
    while (split != end && split->frame == t) ++split;
    CoverNode* self_child = emit_chain(tree, p, split, end);
    CoverNode* nd = make_node(tree, p, NodeScale::at(t));
    nd->children.push_back(self_child);
    for (const KidEntry* e = begin; e != split; ++e)
      nd->children.push_back(emit_point(tree, e->point));
    return nd;
  }

  void finalize(CoverTree& tree, CoverNode* nd, CoverNode* parent) {
    nd->parent = parent;
    nd->leaf_begin = static_cast<int>(tree.leaf_order.size());
    if (nd->is_leaf()) {
      tree.leaf_order.push_back(nd->point_id);
      nd->descendant_count = data_.weight(nd->point_id);
    } else {
      nd->descendant_count = 0;
      for (CoverNode* c : nd->children) {
        finalize(tree, c, nd);
        nd->descendant_count += c->descendant_count;
      }
    }
    nd->leaf_end = static_cast<int>(tree.leaf_order.size());
  }

  const Dataset& data_;
  std::vector<std::vector<KidEntry>> kids_;
};

}  // namespace

CoverTree build_cover_tree(const Dataset& s, BuildConfig config) {
  return Builder(s).run(config);
}

std::vector<NodeScale> CoverTree::max_point_scales() const {
  std::vector<NodeScale> top(dataset->size(), NodeScale::leaf());
  for (const CoverNode& nd : arena)
    if (top[nd.point_id] < nd.scale) top[nd.point_id] = nd.scale;
  return top;
}

std::vector<int> CoverTree::level_points(int s) const {
  const auto top = max_point_scales();
  std::vector<int> pts;
  for (int i = 0; i < dataset->size(); ++i)
    if (top[i] >= NodeScale::at(s)) pts.push_back(i);
  return pts;
}

VerificationReport verify_invariants(const CoverTree& tree) {
  VerificationReport rep;
  auto fail = [&](std::string kind, std::string msg) {
    rep.passed = false;
    rep.violations.push_back({std::move(kind), std::move(msg)});
  };
  auto check = [&](bool ok, const char* kind, auto make_msg) {
    ++rep.checks_run;
    if (!ok) fail(kind, make_msg());
  };
  const Dataset& data = *tree.dataset;
  const int n = data.size();

  // Leaf uniqueness and bookkeeping.
  std::vector<int> leaf_hits(n, 0);
  for (const CoverNode& nd : tree.arena)
    if (nd.is_leaf()) ++leaf_hits[nd.point_id];
  for (int i = 0; i < n; ++i)
    check(leaf_hits[i] == 1, "leaf-uniqueness", [&] {
      return "point " + std::to_string(i) + " appears in " +
             std::to_string(leaf_hits[i]) + " leaves";
    });
  check(tree.node_count <= 2 * n - 1, "node-count", [&] {
    return "node_count " + std::to_string(tree.node_count) + " exceeds 2N-1 = " +
           std::to_string(2 * n - 1);
  });

  for (const CoverNode& nd : tree.arena) {
    if (nd.is_leaf()) {
      check(nd.children.empty(), "leaf-children", [&] {
        return "leaf node " + std::to_string(nd.node_id) + " has children";
      });
      continue;
    }
    check(nd.children.size() >= 2, "internal-degree", [&] {
      return "internal node " + std::to_string(nd.node_id) + " has " +
             std::to_string(nd.children.size()) + " child(ren)";
    });
    const double cover = pow2(nd.scale.value()) * (1.0 + kRelTol);
    for (const CoverNode* c : nd.children) {
      check(c->scale < nd.scale, "scale-order", [&] {
        return "child node " + std::to_string(c->node_id) + " scale " +
               c->scale.to_string() + " not below parent scale " +
               nd.scale.to_string();
      });
      const double d = data.dist(nd.point_id, c->point_id);
      check(d <= cover, "covering", [&] {
        return "child point " + std::to_string(c->point_id) + " at distance " +
               std::to_string(d) + " from parent point " +
               std::to_string(nd.point_id) + " exceeds 2^s = " +
               std::to_string(pow2(nd.scale.value()));
      });
    }
    // Lambda containment over the node's descendant leaves.
    const double span = nd.lambda * (1.0 + kRelTol);
    for (int li = nd.leaf_begin; li < nd.leaf_end; ++li) {
      const int q = tree.leaf_order[li];
      const double d = data.dist(nd.point_id, q);
      check(d <= span, "lambda", [&] {
        return "descendant point " + std::to_string(q) + " at distance " +
               std::to_string(d) + " from node " + std::to_string(nd.node_id) +
               " exceeds lambda = " + std::to_string(nd.lambda);
      });
    }
    // Descendant count consistency (weighted).
    std::int64_t weight = 0;
    for (int li = nd.leaf_begin; li < nd.leaf_end; ++li)
      weight += data.weight(tree.leaf_order[li]);
    check(weight == nd.descendant_count, "descendant-count", [&] {
      return "node " + std::to_string(nd.node_id) + " stores count " +
             std::to_string(nd.descendant_count) + ", subtree holds " +
             std::to_string(weight);
    });
  }

  // Nesting: a point's nodes form a self-chain, each the next one's parent,
  // with strictly decreasing scales, ending at the point's leaf.
  std::vector<std::vector<const CoverNode*>> by_point(n);
  for (const CoverNode& nd : tree.arena) by_point[nd.point_id].push_back(&nd);
  for (int p = 0; p < n; ++p) {
    auto nodes = by_point[p];
    std::sort(nodes.begin(), nodes.end(),
              [](const CoverNode* a, const CoverNode* b) {
                return b->scale < a->scale;
              });
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      check(nodes[i + 1]->parent == nodes[i], "nesting", [&] {
        return "point " + std::to_string(p) + " nodes " +
               std::to_string(nodes[i]->node_id) + " and " +
               std::to_string(nodes[i + 1]->node_id) +
               " are not chained parent-to-child";
      });
      check(nodes[i + 1]->scale < nodes[i]->scale, "nesting", [&] {
        return "point " + std::to_string(p) +
               " repeats scale " + nodes[i]->scale.to_string();
      });
    }
    if (!nodes.empty())
      check(nodes.back()->is_leaf(), "nesting", [&] {
        return "point " + std::to_string(p) + " chain does not end in a leaf";
      });
  }

  // Separation: for any two points present at a level s (top scales both
  // >= s), the pair must be farther apart than 2^s. The binding level is
  // the smaller of the two top scales.
  const auto top = tree.max_point_scales();
  std::vector<int> internal_points;
  for (int i = 0; i < n; ++i)
    if (!top[i].is_leaf()) internal_points.push_back(i);
  for (size_t a = 0; a < internal_points.size(); ++a) {
    for (size_t b = a + 1; b < internal_points.size(); ++b) {
      const int x = internal_points[a], y = internal_points[b];
      const int s = std::min(top[x].value(), top[y].value());
      const double need = pow2(s) * (1.0 - kRelTol);
      const double d = data.dist(x, y);
      check(d > need, "separation", [&] {
        return "points " + std::to_string(x) + " and " + std::to_string(y) +
               " at distance " + std::to_string(d) +
               " both occupy level " + std::to_string(s) +
               " (needs > " + std::to_string(pow2(s)) + ")";
      });
    }
  }
  return rep;
}

int node_imbalance(const CoverNode& n, NodeScale parent_scale,
                   NodeScale s_min) {
  if (n.parent == nullptr) return 0;
  if (n.is_leaf()) {
    if (s_min.is_leaf()) return 0;
    return std::max(parent_scale.value() - s_min.value() - 1, 0);
  }
  return parent_scale.value() - n.scale.value() - 1;
}

ImbalanceReport tree_imbalance(const CoverTree& tree) {
  ImbalanceReport rep;
  rep.per_node.assign(tree.node_count, 0);
  for (const CoverNode& nd : tree.arena) {
    const NodeScale parent_scale =
        nd.parent ? nd.parent->scale : NodeScale::leaf();
    const int in = node_imbalance(nd, parent_scale, tree.s_min);
    rep.per_node[nd.node_id] = in;
    rep.total += in;
    (nd.is_leaf() ? rep.leaf_contribution : rep.internal_contribution) += in;
  }
  return rep;
}

namespace {
int depth_below(const CoverNode* nd) {
  int best = 0;
  for (const CoverNode* c : nd->children)
    best = std::max(best, 1 + depth_below(c));
  return best;
}
}  // namespace

TreeStats tree_stats(const CoverTree& tree, std::optional<double> expansion_c) {
  TreeStats st;
  st.node_count = tree.node_count;
  st.leaf_count = tree.leaf_count;
  st.s_top = tree.s_top;
  st.s_min = tree.s_min;
  st.max_depth = depth_below(tree.root);
  for (const CoverNode& nd : tree.arena)
    st.max_children = std::max(st.max_children,
                               static_cast<int>(nd.children.size()));
  if (expansion_c) {
    st.width_bound = std::pow(*expansion_c, 4.0);
    st.depth_comparator = *expansion_c * *expansion_c *
                          std::log2(std::max(2.0, double(tree.leaf_count)));
  }
  return st;
}

PackingCheck level_packing_check(const CoverTree& tree,
                                 std::span<const double> p, double rho, int s,
                                 double expansion_c) {
  if (rho <= 0.0)
    throw std::invalid_argument("level_packing_check: rho must be positive");
  PackingCheck pc;
  const double radius = rho * pow2(s);
  for (int id : tree.level_points(s))
    if (distance(p, tree.dataset->point(id)) <= radius) ++pc.count;
  pc.bound = std::pow(expansion_c, 2.0 + std::ceil(std::log2(rho)));
  pc.ok = pc.count <= pc.bound;
  return pc;
}

namespace {
nlohmann::json node_to_json(const CoverNode& nd) {
  nlohmann::json j;
  j["point_id"] = nd.point_id;
  if (nd.is_leaf())
    j["scale"] = nullptr;
  else
    j["scale"] = nd.scale.value();
  j["count"] = nd.descendant_count;
  auto children = nlohmann::json::array();
  for (const CoverNode* c : nd.children) children.push_back(node_to_json(*c));
  if (!children.empty()) j["children"] = std::move(children);
  return j;
}
}  // namespace

std::string tree_to_json(const CoverTree& tree, int indent) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["points"] = tree.dataset->size();
  j["node_count"] = tree.node_count;
  j["root"] = node_to_json(*tree.root);
  return j.dump(indent);
}

}  // namespace dualtree
