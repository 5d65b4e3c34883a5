#pragma once

// Brute-force reference implementations used by the unit tests. They work on
// plain node sets and the prefix order only, and never call the library's
// successor lists, masks or dynamic programs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "wft/tree.hpp"

namespace brute {

using wft::Node;
using NodeSet = std::set<Node>;

inline NodeSet nodes(const wft::WfTree& t) { return NodeSet(t.nodes().begin(), t.nodes().end()); }

inline Node root(const NodeSet& s) { return *s.begin(); }

// Minimal members of s strictly above v.
inline std::vector<Node> children(const NodeSet& s, const Node& v) {
  std::vector<Node> above;
  for (const auto& n : s) {
    if (v.is_proper_prefix_of(n)) above.push_back(n);
  }
  std::vector<Node> out;
  for (const auto& n : above) {
    bool minimal = std::none_of(above.begin(), above.end(), [&](const Node& o) { return o.is_proper_prefix_of(n); });
    if (minimal) out.push_back(n);
  }
  return out;
}

inline std::vector<std::vector<Node>> branches(const NodeSet& s) {
  std::vector<std::vector<Node>> out;
  std::vector<Node> path;
  std::function<void(const Node&)> walk = [&](const Node& v) {
    path.push_back(v);
    auto ch = children(s, v);
    if (ch.empty()) out.push_back(path);
    for (const auto& c : ch) walk(c);
    path.pop_back();
  };
  walk(root(s));
  return out;
}

inline std::size_t depth(const NodeSet& s) {
  std::size_t d = 0;
  for (const auto& b : branches(s)) d = std::max(d, b.size() - 1);
  return d;
}

inline bool antichain(const std::vector<Node>& ys) {
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      if (ys[i].comparable(ys[j])) return false;
    }
  }
  return true;
}

inline bool every_branch_meets(const NodeSet& s, const NodeSet& ys) {
  for (const auto& b : branches(s)) {
    if (std::none_of(b.begin(), b.end(), [&](const Node& n) { return ys.count(n) != 0; })) return false;
  }
  return true;
}

inline bool is_front(const NodeSet& s, const std::vector<Node>& ys) {
  for (const auto& y : ys) {
    if (!s.count(y)) return false;
  }
  return antichain(ys) && every_branch_meets(s, NodeSet(ys.begin(), ys.end()));
}

// Subtrees of `host` with the same root in which every kept internal node keeps
// a nonempty set of its host children, paired with the largest number of
// children removed at one node.
struct Sub {
  NodeSet nodes;
  std::size_t removed = 0;
  std::size_t min_kept = SIZE_MAX;
};

inline std::vector<Sub> subtrees(const NodeSet& host, std::size_t limit = 1u << 18) {
  std::function<std::vector<Sub>(const Node&)> rec = [&](const Node& v) {
    auto ch = children(host, v);
    if (ch.empty()) return std::vector<Sub>{Sub{{v}, 0, SIZE_MAX}};
    std::vector<std::vector<Sub>> parts;
    for (const auto& c : ch) parts.push_back(rec(c));
    std::vector<Sub> out;
    for (std::uint32_t mask = 1; mask < (1u << ch.size()); ++mask) {
      std::vector<Sub> acc{Sub{{v}, ch.size() - static_cast<std::size_t>(std::popcount(mask)),
                               static_cast<std::size_t>(std::popcount(mask))}};
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (!(mask >> i & 1u)) continue;
        std::vector<Sub> next;
        for (const auto& a : acc) {
          for (const auto& p : parts[i]) {
            Sub s = a;
            s.nodes.insert(p.nodes.begin(), p.nodes.end());
            s.removed = std::max(s.removed, p.removed);
            s.min_kept = std::min(s.min_kept, p.min_kept);
            next.push_back(std::move(s));
            if (next.size() > limit) throw std::length_error("too many subtrees");
          }
        }
        acc = std::move(next);
      }
      out.insert(out.end(), acc.begin(), acc.end());
      if (out.size() > limit) throw std::length_error("too many subtrees");
    }
    return out;
  };
  return rec(root(host));
}

inline std::vector<NodeSet> sb(const NodeSet& host, std::size_t k) {
  std::vector<NodeSet> out;
  for (auto& s : subtrees(host)) {
    if (s.removed <= k) out.push_back(std::move(s.nodes));
  }
  return out;
}

inline std::vector<NodeSet> psb(const NodeSet& host, std::size_t m) {
  std::vector<NodeSet> out;
  for (auto& s : subtrees(host)) {
    if (s.min_kept >= m) out.push_back(std::move(s.nodes));
  }
  return out;
}

inline std::vector<std::vector<Node>> antichains(const NodeSet& s) {
  std::vector<Node> all(s.begin(), s.end());
  std::vector<std::vector<Node>> out;
  std::vector<Node> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == all.size()) {
      out.push_back(cur);
      return;
    }
    rec(i + 1);
    if (std::none_of(cur.begin(), cur.end(), [&](const Node& n) { return n.comparable(all[i]); })) {
      cur.push_back(all[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<std::vector<Node>> fronts(const NodeSet& s) {
  std::vector<std::vector<Node>> out;
  for (auto& a : antichains(s)) {
    if (is_front(s, a)) out.push_back(std::move(a));
  }
  return out;
}

// Some pruning among `prunings` leaves every branch meeting `ys`.
inline bool almost_front(const std::vector<NodeSet>& prunings, const std::vector<Node>& ys) {
  if (!antichain(ys)) return false;
  NodeSet y(ys.begin(), ys.end());
  return std::any_of(prunings.begin(), prunings.end(), [&](const NodeSet& s) { return every_branch_meets(s, y); });
}

inline bool almost_front(const NodeSet& host, const std::vector<Node>& ys, std::size_t k) {
  return almost_front(sb(host, k), ys);
}

// X belongs to the filter of Y: some pruning leaves every branch meeting Y ∩ X.
inline bool filter_member(const std::vector<NodeSet>& prunings, const std::vector<Node>& ys,
                          const std::vector<Node>& xs) {
  NodeSet both;
  for (const auto& y : ys) {
    if (std::find(xs.begin(), xs.end(), y) != xs.end()) both.insert(y);
  }
  return std::any_of(prunings.begin(), prunings.end(), [&](const NodeSet& s) { return every_branch_meets(s, both); });
}

inline bool filter_member(const NodeSet& host, const std::vector<Node>& ys, const std::vector<Node>& xs, std::size_t k) {
  return filter_member(sb(host, k), ys, xs);
}

// Every almost front of t1 is an almost front of t2 (same budget).
inline bool leq_by_fronts(const NodeSet& t1, const NodeSet& t2, std::size_t k) {
  if (root(t1) != root(t2)) return false;
  auto p1 = sb(t1, k);
  auto p2 = sb(t2, k);
  for (const auto& a : antichains(t1)) {
    if (almost_front(p1, a)) {
      std::vector<Node> in2;
      for (const auto& n : a) {
        if (t2.count(n)) in2.push_back(n);
      }
      if (!almost_front(p2, in2)) return false;
    }
  }
  return true;
}

// A random tree: root <>, each internal node gets between lo and hi children
// in distinct directions among the first `dirs`.
inline wft::WfTree random_tree(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t hi, std::uint32_t dirs,
                               std::uint32_t max_depth, double leaf_chance) {
  std::vector<Node> out;
  std::function<void(const Node&, std::uint32_t)> grow = [&](const Node& v, std::uint32_t d) {
    out.push_back(v);
    if (d == max_depth || (d > 0 && std::uniform_real_distribution<double>(0, 1)(rng) < leaf_chance)) return;
    std::vector<std::uint32_t> ds(dirs);
    for (std::uint32_t i = 0; i < dirs; ++i) ds[i] = i;
    std::shuffle(ds.begin(), ds.end(), rng);
    auto n = lo + static_cast<std::uint32_t>(rng() % (hi - lo + 1));
    for (std::uint32_t i = 0; i < n; ++i) grow(v.child(ds[i]), d + 1);
  };
  grow(Node{}, 0);
  return wft::WfTree::from_nodes(out);
}

}  // namespace brute
