#include "wft/tree.hpp"

#include <algorithm>
#include <set>

namespace wft {

void SurrogateParams::check() const {
  if (width < 2) throw Error("InvalidParams", "width must be at least 2");
  if (keep_min < 1) throw Error("InvalidParams", "keep_min must be at least 1");
  if (keep_min > width) throw Error("InvalidParams", "keep_min must not exceed width");
  if (budget >= width) throw Error("InvalidParams", "budget must be below width");
  if (direction_threshold > width) throw Error("InvalidParams", "direction_threshold must not exceed width");
}

bool ValidationReport::violates(const std::string& clause) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.clause == clause; });
}

WfTree WfTree::singleton(Node root) { return from_nodes({std::move(root)}); }

WfTree WfTree::from_nodes(std::vector<Node> nodes, const std::vector<Node>& elided_internal) {
  if (nodes.empty()) throw Error("NotATree", "empty node set");
  if (!std::is_sorted(nodes.begin(), nodes.end())) std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  WfTree t;
  t.nodes_ = std::move(nodes);
  t.link();
  for (const auto& e : elided_internal) {
    auto i = t.find(e);
    if (!i) throw Error("NodeNotInTree", e.to_string());
    t.internal_[static_cast<std::size_t>(*i)] = 1;
  }
  return t;
}

void WfTree::link() {
  const std::size_t n = nodes_.size();
  parent_.assign(n, -1);
  succ_.assign(n, {});
  internal_.assign(n, 0);
  std::vector<NodeIndex> stack;
  stack.reserve(64);
  for (std::size_t i = 0; i < n; ++i) {
    while (!stack.empty() &&
           !nodes_[static_cast<std::size_t>(stack.back())].is_proper_prefix_of(nodes_[i])) {
      stack.pop_back();
    }
    if (stack.empty()) {
      if (i != 0) {
        throw Error("NotATree", "no unique minimal node: " + nodes_[0].to_string() + " and " +
                                    nodes_[i].to_string() + " are incomparable");
      }
    } else {
      parent_[i] = stack.back();
      succ_[static_cast<std::size_t>(stack.back())].push_back(static_cast<NodeIndex>(i));
      internal_[static_cast<std::size_t>(stack.back())] = 1;
    }
    stack.push_back(static_cast<NodeIndex>(i));
  }
}

WfTree WfTree::uniform(const Node& root, std::uint32_t width, std::uint32_t depth) {
  std::vector<Node> out;
  // Depth-first emission keeps the output sorted.
  struct Rec {
    std::vector<Node>& out;
    std::uint32_t width;
    void go(const Node& n, std::uint32_t left) {
      out.push_back(n);
      if (left == 0) return;
      for (std::uint32_t d = 0; d < width; ++d) go(n.child(d), left - 1);
    }
  } rec{out, width};
  rec.go(root, depth);
  return from_nodes(std::move(out));
}

std::optional<NodeIndex> WfTree::find(const Node& n) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex WfTree::index_of(const Node& n) const {
  auto i = find(n);
  if (!i) throw Error("NodeNotInTree", n.to_string());
  return *i;
}

std::vector<Node> WfTree::successor_nodes(const Node& n) const {
  std::vector<Node> out;
  for (auto s : successors(index_of(n))) out.push_back(node(s));
  return out;
}

std::vector<NodeIndex> WfTree::maximal_indices() const {
  std::vector<NodeIndex> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (succ_[i].empty()) out.push_back(static_cast<NodeIndex>(i));
  }
  return out;
}

std::vector<Node> WfTree::maximal() const {
  std::vector<Node> out;
  for (auto i : maximal_indices()) out.push_back(node(i));
  return out;
}

NodeMask WfTree::mask_of(std::span<const Node> members) const {
  NodeMask m(size(), 0);
  for (const auto& n : members) m[static_cast<std::size_t>(index_of(n))] = 1;
  return m;
}

std::vector<Node> WfTree::nodes_of(const NodeMask& mask) const {
  std::vector<Node> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(nodes_[i]);
  }
  return out;
}

WfTree WfTree::induced(const NodeMask& mask) const {
  if (mask.empty() || !mask[0]) throw Error("NotATree", "induced subtree must contain the root");
  WfTree t;
  std::vector<Node> elided;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!mask[i]) continue;
    t.nodes_.push_back(nodes_[i]);
    if (internal_[i] && succ_[i].empty()) elided.push_back(nodes_[i]);
  }
  t.link();
  for (const auto& e : elided) t.internal_[static_cast<std::size_t>(t.index_of(e))] = 1;
  return t;
}

bool WfTree::subset_of(const WfTree& other) const {
  return std::includes(other.nodes_.begin(), other.nodes_.end(), nodes_.begin(), nodes_.end());
}

ValidationReport validate_cwt(const WfTree& t, const SurrogateParams& p) {
  ValidationReport r;
  // (a)-(c) and (e) hold by construction for the prefix order; assert the
  // structural facts they rest on so a corrupted value still gets reported.
  for (std::size_t i = 1; i < t.size(); ++i) {
    auto par = t.parent(static_cast<NodeIndex>(i));
    if (par < 0 || !t.node(par).is_proper_prefix_of(t.node(static_cast<NodeIndex>(i)))) {
      r.violations.push_back({"c", {t.node(static_cast<NodeIndex>(i))}, "parent is not a proper prefix"});
    }
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    auto succ = t.successors(idx);
    if (t.is_internal(idx) && succ.size() < p.width) {
      r.violations.push_back({"d", {t.node(idx)}, "internal node below width"});
    }
    std::set<Node::value_type> seen;
    std::vector<Node> clash;
    for (auto s : succ) {
      if (!seen.insert(t.node(s).direction_from(t.node(idx))).second) clash.push_back(t.node(s));
    }
    if (!clash.empty()) {
      clash.insert(clash.begin(), t.node(idx));
      r.violations.push_back({"f", std::move(clash), "successors share a direction"});
    }
  }
  return r;
}

std::size_t count_avoiding(const WfTree& t, const Node& at, std::span<const Node> obstructions) {
  std::size_t n = 0;
  for (auto s : t.successors(t.index_of(at))) {
    bool ok = std::none_of(obstructions.begin(), obstructions.end(),
                           [&](const Node& f) { return f.comparable(t.node(s)); });
    n += ok ? 1 : 0;
  }
  return n;
}

std::uint32_t depth(const WfTree& t) {
  std::vector<std::uint32_t> d(t.size(), 0);
  for (std::size_t i = t.size(); i-- > 1;) {
    auto par = static_cast<std::size_t>(t.parent(static_cast<NodeIndex>(i)));
    d[par] = std::max(d[par], d[i] + 1);
  }
  return d[0];
}

WfTree restrict(const WfTree& t, const Node& at) {
  auto start = static_cast<std::size_t>(t.index_of(at));
  std::vector<Node> nodes;
  std::vector<Node> elided;
  // Extensions of `at` form a contiguous block in sorted order.
  for (std::size_t i = start; i < t.size() && at.is_prefix_of(t.node(static_cast<NodeIndex>(i))); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    nodes.push_back(t.node(idx));
    if (t.is_internal(idx) && !t.has_successors(idx)) elided.push_back(t.node(idx));
  }
  return WfTree::from_nodes(std::move(nodes), elided);
}

WfTree below_front(const WfTree& t, std::span<const Node> front) {
  NodeMask m(t.size(), 0);
  m[0] = 1;
  for (const auto& y : front) {
    for (NodeIndex i = t.index_of(y); i >= 0 && !m[static_cast<std::size_t>(i)]; i = t.parent(i)) {
      m[static_cast<std::size_t>(i)] = 1;
    }
  }
  std::vector<Node> nodes = t.nodes_of(m);
  return WfTree::from_nodes(std::move(nodes));
}

std::vector<std::vector<NodeIndex>> branches(const WfTree& t) {
  std::vector<std::vector<NodeIndex>> out;
  for (auto leaf : t.maximal_indices()) {
    std::vector<NodeIndex> b;
    for (NodeIndex i = leaf; i >= 0; i = t.parent(i)) b.push_back(i);
    std::reverse(b.begin(), b.end());
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace wft
