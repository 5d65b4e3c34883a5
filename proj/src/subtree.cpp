#include "wft/subtree.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <set>
#include <unordered_map>

namespace wft {

std::size_t SbWitness::max_removed() const {
  std::size_t m = 0;
  for (const auto& [at, drop] : pruned) m = std::max(m, drop.size());
  return m;
}

WfTree apply_pruning(const WfTree& host, const SbWitness& w) {
  std::set<Node> removed;
  for (const auto& [at, drop] : w.pruned) removed.insert(drop.begin(), drop.end());
  NodeMask keep(host.size(), 0);
  keep[0] = 1;
  for (std::size_t i = 1; i < host.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    keep[i] = keep[static_cast<std::size_t>(host.parent(idx))] && !removed.count(host.node(idx));
  }
  return host.induced(keep);
}

const char* to_string(FrontKind k) noexcept {
  switch (k) {
    case FrontKind::front: return "front";
    case FrontKind::almost_front: return "almost_front";
    case FrontKind::antichain_only: return "antichain_only";
    case FrontKind::not_antichain: return "not_antichain";
  }
  return "?";
}

bool is_antichain(std::span<const Node> ys) {
  std::vector<Node> s(ys.begin(), ys.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  // Extensions of a node are contiguous after it, so adjacent pairs suffice.
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i - 1].is_prefix_of(s[i])) return false;
  }
  return true;
}

namespace {

// good[i]: the cone at i can be pruned (<= budget per node, keeping one) so that
// every remaining branch meets `hit`. Nodes in `block` are never good.
std::vector<char> goodness(const WfTree& t, const NodeMask& hit, const NodeMask* block, std::uint32_t budget) {
  const std::size_t n = t.size();
  std::vector<char> good(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    if (hit[i]) {
      good[i] = 1;
      continue;
    }
    if (block && (*block)[i]) continue;
    auto succ = t.successors(static_cast<NodeIndex>(i));
    if (succ.empty()) continue;
    std::size_t bad = 0;
    for (auto s : succ) bad += good[static_cast<std::size_t>(s)] ? 0 : 1;
    good[i] = bad <= budget && bad < succ.size();
  }
  return good;
}

SbWitness witness_from(const WfTree& t, const std::vector<char>& good, const NodeMask& stop) {
  SbWitness w;
  std::vector<NodeIndex> stack{0};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (stop[static_cast<std::size_t>(v)]) continue;
    std::vector<Node> drop;
    for (auto s : t.successors(v)) {
      if (good[static_cast<std::size_t>(s)]) {
        stack.push_back(s);
      } else {
        drop.push_back(t.node(s));
      }
    }
    if (!drop.empty()) w.pruned.emplace(t.node(v), std::move(drop));
  }
  return w;
}

}  // namespace

bool meets_every_branch(const WfTree& t, const NodeMask& ys) { return goodness(t, ys, nullptr, 0)[0] != 0; }

std::optional<SbWitness> almost_front_witness(const WfTree& t, const NodeMask& ys, std::uint32_t budget) {
  auto good = goodness(t, ys, nullptr, budget);
  if (!good[0]) return std::nullopt;
  return witness_from(t, good, ys);
}

bool is_almost_front(const WfTree& t, const NodeMask& ys, std::uint32_t budget) {
  return goodness(t, ys, nullptr, budget)[0] != 0;
}

FrontClassification classify_front(const WfTree& t, std::span<const Node> ys, const SurrogateParams& p) {
  auto mask = t.mask_of(ys);
  FrontClassification r;
  if (!is_antichain(ys)) return r;
  if (meets_every_branch(t, mask)) {
    r.kind = FrontKind::front;
    return r;
  }
  if (auto w = almost_front_witness(t, mask, p.budget)) {
    r.kind = FrontKind::almost_front;
    r.witness = std::move(*w);
    return r;
  }
  r.kind = FrontKind::antichain_only;
  return r;
}

bool is_above(std::span<const Node> lower, std::span<const Node> upper) {
  return std::all_of(upper.begin(), upper.end(), [&](const Node& eta) {
    return std::any_of(lower.begin(), lower.end(), [&](const Node& nu) { return nu.is_prefix_of(eta); });
  });
}

std::map<Node, Node> projection(std::span<const Node> y1, std::span<const Node> y2) {
  if (!is_antichain(y1)) throw Error("NotAntichain", "first argument");
  if (!is_antichain(y2)) throw Error("NotAntichain", "second argument");
  std::vector<Node> lower(y1.begin(), y1.end());
  std::sort(lower.begin(), lower.end());
  std::map<Node, Node> h;
  for (const auto& eta : y2) {
    // The candidate below eta is the largest member of y1 not exceeding it.
    auto it = std::upper_bound(lower.begin(), lower.end(), eta);
    if (it != lower.begin() && std::prev(it)->is_prefix_of(eta)) h.emplace(eta, *std::prev(it));
  }
  return h;
}

namespace {

void check_roots_and_coherence(const WfTree& sub, const WfTree& host) {
  if (sub.root() != host.root()) {
    throw Error("RootMismatch", sub.root().to_string() + " vs " + host.root().to_string());
  }
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    auto h = host.find(sub.node(idx));
    if (!h) continue;
    for (auto s : sub.successors(idx)) {
      if (host.parent(host.find(sub.node(s)).value_or(0)) != *h) {
        throw Error("CoherenceViolation", sub.node(idx).to_string());
      }
    }
  }
}

}  // namespace

std::optional<SbWitness> check_sb(const WfTree& sub, const WfTree& host, const SurrogateParams& p) {
  if (!sub.subset_of(host)) {
    if (sub.root() != host.root()) throw Error("RootMismatch", sub.root().to_string() + " vs " + host.root().to_string());
    return std::nullopt;
  }
  check_roots_and_coherence(sub, host);
  SbWitness w;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    auto h = host.index_of(sub.node(idx));
    auto hs = host.successors(h);
    if (hs.empty()) continue;
    std::vector<Node> drop;
    for (auto s : hs) {
      if (!sub.contains(host.node(s))) drop.push_back(host.node(s));
    }
    if (drop.size() > p.budget || drop.size() == hs.size()) return std::nullopt;
    if (!drop.empty()) w.pruned.emplace(sub.node(idx), std::move(drop));
  }
  return w;
}

bool check_psb(const WfTree& sub, const WfTree& host, const SurrogateParams& p) {
  if (sub.root() != host.root() || !sub.subset_of(host)) return false;
  try {
    check_roots_and_coherence(sub, host);
  } catch (const Error&) {
    return false;
  }
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    auto hs = host.successors(host.index_of(sub.node(idx)));
    if (hs.empty()) continue;
    if (sub.successors(idx).size() < p.keep_min) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Front transfer DP over the union of two trees sharing a root.

namespace {

struct UnionForest {
  std::vector<Node> nodes;
  std::vector<NodeIndex> parent;
  std::vector<std::vector<NodeIndex>> kids;
  std::vector<char> in_a, in_b;
};

UnionForest make_union(const WfTree& a, const WfTree& b) {
  UnionForest u;
  std::set_union(a.nodes().begin(), a.nodes().end(), b.nodes().begin(), b.nodes().end(),
                 std::back_inserter(u.nodes));
  auto t = WfTree::from_nodes(u.nodes);
  const std::size_t n = u.nodes.size();
  u.parent.resize(n);
  u.kids.resize(n);
  u.in_a.resize(n);
  u.in_b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto idx = static_cast<NodeIndex>(i);
    u.parent[i] = t.parent(idx);
    auto s = t.successors(idx);
    u.kids[i].assign(s.begin(), s.end());
    u.in_a[i] = a.contains(u.nodes[i]);
    u.in_b[i] = b.contains(u.nodes[i]);
  }
  return u;
}

// A state at a union node is (sa, sb). For a side containing the node the value
// is its good bit; otherwise it is the capped number of bad nodes of that side's
// frontier above the node. Tables are indexed sa * dim_b + sb.
class TransferDp {
 public:
  TransferDp(const WfTree& a, std::uint32_t ka, const WfTree& b, std::uint32_t kb)
      : u_(make_union(a, b)), ka_(ka), kb_(kb), da_(ka + 2), db_(kb + 2) {
    const std::size_t n = u_.nodes.size();
    frontier_b_.assign(n, 0);
    succ_a_.assign(n, 0);
    succ_b_.assign(n, 0);
    states_.assign(n, {});
    prefix_.assign(n, {});
    for (std::size_t i = n; i-- > 0;) {
      for (auto c : u_.kids[i]) {
        auto ci = static_cast<std::size_t>(c);
        frontier_b_[i] += u_.in_b[ci] ? 1 : frontier_b_[ci];
        succ_a_[i] += u_.in_a[ci] ? 1 : succ_a_[ci];
        succ_b_[i] += u_.in_b[ci] ? 1 : succ_b_[ci];
      }
      solve(i);
    }
  }

  bool adversary_wins() const { return has(0, 1, 0); }

  std::vector<Node> counterexample() const {
    std::vector<Node> ys;
    rebuild(0, 1, 0, ys);
    std::sort(ys.begin(), ys.end());
    return ys;
  }

 private:
  using Table = std::vector<char>;

  std::size_t cell(std::size_t sa, std::size_t sb) const { return sa * db_ + sb; }
  bool has(std::size_t i, std::size_t sa, std::size_t sb) const { return states_[i][cell(sa, sb)] != 0; }

  std::size_t contrib_a(std::size_t c, std::size_t sa) const { return u_.in_a[c] ? 1 - sa : sa; }
  std::size_t contrib_b(std::size_t c, std::size_t sb) const { return u_.in_b[c] ? 1 - sb : sb; }

  // Node state from summed bad counts of the children.
  std::pair<std::size_t, std::size_t> close(std::size_t i, std::size_t bad_a, std::size_t bad_b) const {
    std::size_t sa = u_.in_a[i] ? (succ_a_[i] > 0 && bad_a <= ka_ && bad_a < succ_a_[i]) : bad_a;
    std::size_t sb = u_.in_b[i] ? (succ_b_[i] > 0 && bad_b <= kb_ && bad_b < succ_b_[i]) : bad_b;
    return {sa, sb};
  }

  std::pair<std::size_t, std::size_t> chosen_state(std::size_t i) const {
    return {1, u_.in_b[i] ? 1 : std::min<std::size_t>(frontier_b_[i], kb_ + 1)};
  }

  void solve(std::size_t i) {
    auto& pre = prefix_[i];
    pre.emplace_back(da_ * db_, 0);
    pre.back()[cell(0, 0)] = 1;
    for (auto c : u_.kids[i]) {
      auto ci = static_cast<std::size_t>(c);
      Table next(da_ * db_, 0);
      const Table& cur = pre.back();
      for (std::size_t x = 0; x < da_; ++x) {
        for (std::size_t y = 0; y < db_; ++y) {
          if (!cur[cell(x, y)]) continue;
          for (std::size_t sa = 0; sa < da_; ++sa) {
            for (std::size_t sb = 0; sb < db_; ++sb) {
              if (!states_[ci][cell(sa, sb)]) continue;
              auto nx = std::min(x + contrib_a(ci, sa), da_ - 1);
              auto ny = std::min(y + contrib_b(ci, sb), db_ - 1);
              next[cell(nx, ny)] = 1;
            }
          }
        }
      }
      pre.push_back(std::move(next));
    }
    Table st(da_ * db_, 0);
    const Table& sums = pre.back();
    for (std::size_t x = 0; x < da_; ++x) {
      for (std::size_t y = 0; y < db_; ++y) {
        if (!sums[cell(x, y)]) continue;
        auto [sa, sb] = close(i, x, y);
        st[cell(sa, sb)] = 1;
      }
    }
    if (u_.in_a[i]) {
      auto [sa, sb] = chosen_state(i);
      st[cell(sa, sb)] = 1;
    }
    states_[i] = std::move(st);
  }

  void rebuild(std::size_t i, std::size_t sa, std::size_t sb, std::vector<Node>& ys) const {
    if (u_.in_a[i] && std::pair{sa, sb} == chosen_state(i)) {
      ys.push_back(u_.nodes[i]);
      return;
    }
    const auto& pre = prefix_[i];
    const Table& sums = pre.back();
    std::size_t tx = da_, ty = db_;
    for (std::size_t x = 0; x < da_ && tx == da_; ++x) {
      for (std::size_t y = 0; y < db_; ++y) {
        if (sums[cell(x, y)] && close(i, x, y) == std::pair{sa, sb}) {
          tx = x;
          ty = y;
          break;
        }
      }
    }
    for (std::size_t j = u_.kids[i].size(); j-- > 0;) {
      auto ci = static_cast<std::size_t>(u_.kids[i][j]);
      const Table& before = pre[j];
      bool found = false;
      for (std::size_t ca = 0; ca < da_ && !found; ++ca) {
        for (std::size_t cb = 0; cb < db_ && !found; ++cb) {
          if (!states_[ci][cell(ca, cb)]) continue;
          for (std::size_t x = 0; x < da_ && !found; ++x) {
            for (std::size_t y = 0; y < db_; ++y) {
              if (!before[cell(x, y)]) continue;
              if (std::min(x + contrib_a(ci, ca), da_ - 1) != tx) continue;
              if (std::min(y + contrib_b(ci, cb), db_ - 1) != ty) continue;
              rebuild(ci, ca, cb, ys);
              tx = x;
              ty = y;
              found = true;
              break;
            }
          }
        }
      }
    }
  }

  UnionForest u_;
  std::size_t ka_, kb_, da_, db_;
  std::vector<std::size_t> frontier_b_, succ_a_, succ_b_;
  std::vector<Table> states_;
  std::vector<std::vector<Table>> prefix_;
};

}  // namespace

std::optional<std::vector<Node>> front_transfer_counterexample(const WfTree& src, std::uint32_t src_budget,
                                                               const WfTree& dst, std::uint32_t dst_budget) {
  if (src.root() != dst.root()) throw Error("RootMismatch", src.root().to_string() + " vs " + dst.root().to_string());
  TransferDp dp(src, src_budget, dst, dst_budget);
  if (!dp.adversary_wins()) return std::nullopt;
  return dp.counterexample();
}

bool leq_star_by_fronts(const WfTree& t1, const WfTree& t2, const SurrogateParams& p,
                        std::optional<std::uint32_t> target_budget) {
  if (t1.root() != t2.root()) return false;
  return !front_transfer_counterexample(t1, p.budget, t2, target_budget.value_or(p.budget)).has_value();
}

namespace {

// Both clauses for one candidate pruning of t2.
bool witness_ok(const WfTree& t1, const WfTree& t2, const WfTree& cand, const SurrogateParams& p,
                std::uint32_t target) {
  NodeMask m(t1.size(), 0);
  for (std::size_t i = 0; i < t1.size(); ++i) m[i] = cand.contains(t1.node(static_cast<NodeIndex>(i)));
  if (!m[0]) return false;
  auto inter = t1.induced(m);
  if (!check_psb(inter, t1, p)) return false;
  return !front_transfer_counterexample(inter, p.budget, t2, target).has_value();
}

}  // namespace

namespace {

// Drop lists (t2 indices) of prunings that can change t2' ∩ t1: only
// successors whose cone meets t1 are ever dropped.
std::vector<std::vector<NodeIndex>> relevant_prunings(const WfTree& t2, const std::vector<char>& meets, NodeIndex v,
                                                      std::uint32_t budget, std::size_t cap) {
  auto succ = t2.successors(v);
  std::vector<NodeIndex> rel;
  for (auto s : succ) {
    if (meets[static_cast<std::size_t>(s)]) rel.push_back(s);
  }
  std::vector<std::vector<std::vector<NodeIndex>>> sub;
  for (auto s : rel) sub.push_back(relevant_prunings(t2, meets, s, budget, cap));
  if (rel.size() > 20) throw Error("SizeLimitExceeded", "successor set too wide to enumerate");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << rel.size()); ++m) {
    auto dropped = static_cast<std::size_t>(std::popcount(m));
    if (dropped <= budget && dropped < succ.size()) masks.push_back(m);
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  std::vector<std::vector<NodeIndex>> out;
  for (auto m : masks) {
    std::vector<std::vector<NodeIndex>> acc{{}};
    for (std::size_t j = 0; j < rel.size(); ++j) {
      if (m >> j & 1u) {
        for (auto& a : acc) a.push_back(rel[j]);
        continue;
      }
      std::vector<std::vector<NodeIndex>> next;
      for (const auto& a : acc) {
        for (const auto& b : sub[j]) {
          auto c = a;
          c.insert(c.end(), b.begin(), b.end());
          next.push_back(std::move(c));
          if (next.size() > cap) throw Error("SizeLimitExceeded", "witness search");
        }
      }
      acc = std::move(next);
    }
    for (auto& a : acc) out.push_back(std::move(a));
    if (out.size() > cap) throw Error("SizeLimitExceeded", "witness search");
  }
  return out;
}

}  // namespace

LeqStarVerdict leq_star(const WfTree& t1, const WfTree& t2, const SurrogateParams& p, const LeqStarOptions& opts) {
  LeqStarVerdict v;
  if (t1.root() != t2.root()) return v;
  const auto target = opts.target_budget.value_or(p.budget);
  if (t1 == t2 || (target >= p.budget && p.budget < p.keep_min && check_psb(t2, t1, p))) {
    v.holds = true;
    v.witness = t2;
    return v;
  }
  if (witness_ok(t1, t2, t2, p, target)) {
    v.holds = true;
    v.witness = t2;
    return v;
  }
  // A witness forces every almost front of t1 into t2 once k < keep_min, so a
  // failed inclusion rules out every candidate.
  if (p.budget < p.keep_min && !leq_star_by_fronts(t1, t2, p, target)) return v;

  std::vector<char> meets(t2.size(), 0);
  for (std::size_t i = t2.size(); i-- > 0;) {
    auto idx = static_cast<NodeIndex>(i);
    if (t1.contains(t2.node(idx))) meets[i] = 1;
    if (meets[i] && i > 0) meets[static_cast<std::size_t>(t2.parent(idx))] = 1;
  }
  auto drops = relevant_prunings(t2, meets, 0, p.budget, opts.max_candidates);
  std::stable_sort(drops.begin(), drops.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::set<std::vector<Node>> seen;
  for (const auto& d : drops) {
    NodeMask keep(t2.size(), 1);
    for (auto i : d) keep[static_cast<std::size_t>(i)] = 0;
    for (std::size_t i = 1; i < t2.size(); ++i) {
      if (!keep[static_cast<std::size_t>(t2.parent(static_cast<NodeIndex>(i)))]) keep[i] = 0;
    }
    std::vector<Node> key;
    for (std::size_t i = 0; i < t2.size(); ++i) {
      if (keep[i] && t1.contains(t2.node(static_cast<NodeIndex>(i)))) key.push_back(t2.node(static_cast<NodeIndex>(i)));
    }
    if (!seen.insert(key).second) continue;
    auto cand = t2.induced(keep);
    if (witness_ok(t1, t2, cand, p, target)) {
      v.holds = true;
      v.witness = std::move(cand);
      return v;
    }
  }
  return v;
}

FilterDecision filter_member(const WfTree& t, std::span<const Node> ys, std::span<const Node> xs,
                             const SurrogateParams& p) {
  auto ym = t.mask_of(ys);
  auto xm = t.mask_of(xs);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (xm[i] && !ym[i]) throw Error("NotSubset", t.node(static_cast<NodeIndex>(i)).to_string() + " is not in Y");
  }
  if (!is_antichain(ys) || !is_almost_front(t, ym, p.budget)) throw Error("NotAlmostFront", "Y");
  FilterDecision d;
  auto good = goodness(t, xm, &ym, p.budget);
  if (!good[0]) return d;
  d.member = true;
  d.witness = witness_from(t, good, xm);
  return d;
}

bool filter_member_mask(const WfTree& t, const NodeMask& ys, const NodeMask& xs, std::uint32_t budget) {
  return goodness(t, xs, &ys, budget)[0] != 0;
}

bool ideal_member(const WfTree& t, const Node& at, std::span<const Node> c, const SurrogateParams& p) {
  auto v = t.index_of(at);
  std::set<Node::value_type> dirs;
  for (const auto& n : c) {
    auto i = t.find(n);
    if (!i || t.parent(*i) != v) throw Error("NotSubset", n.to_string() + " is not a successor of " + at.to_string());
    dirs.insert(n.direction_from(at));
  }
  return dirs.size() < p.direction_threshold;
}

// ---------------------------------------------------------------------------
// Enumerators

std::vector<NodeMask> enumerate_antichains(const WfTree& t, std::size_t cap) {
  // Antichains of a cone: either {v} or a product over the successors' cones
  // (each possibly empty). Built bottom-up as index lists.
  const std::size_t n = t.size();
  std::vector<std::vector<std::vector<NodeIndex>>> sets(n);
  for (std::size_t i = n; i-- > 0;) {
    std::vector<std::vector<NodeIndex>> acc{{}};
    for (auto s : t.successors(static_cast<NodeIndex>(i))) {
      const auto& sub = sets[static_cast<std::size_t>(s)];
      std::vector<std::vector<NodeIndex>> next;
      next.reserve(acc.size() * sub.size());
      for (const auto& a : acc) {
        for (const auto& b : sub) {
          auto c = a;
          c.insert(c.end(), b.begin(), b.end());
          next.push_back(std::move(c));
          if (next.size() > cap) throw Error("SizeLimitExceeded", "antichain enumeration");
        }
      }
      acc = std::move(next);
    }
    acc.push_back({static_cast<NodeIndex>(i)});
    sets[i] = std::move(acc);
    for (auto s : t.successors(static_cast<NodeIndex>(i))) sets[static_cast<std::size_t>(s)].clear();
  }
  std::vector<NodeMask> out;
  out.reserve(sets[0].size());
  for (const auto& s : sets[0]) {
    NodeMask m(n, 0);
    for (auto i : s) m[static_cast<std::size_t>(i)] = 1;
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Cones (index lists) of subtrees rooted at i where each internal node keeps a
// successor subset accepted by `keep_ok(kept, total)`.
template <class KeepOk>
std::vector<std::vector<NodeIndex>> cones(const WfTree& t, NodeIndex i, KeepOk keep_ok, std::size_t cap) {
  auto succ = t.successors(i);
  if (succ.empty()) return {{i}};
  std::vector<std::vector<std::vector<NodeIndex>>> child;
  for (auto s : succ) child.push_back(cones(t, s, keep_ok, cap));
  const std::size_t k = succ.size();
  if (k > 20) throw Error("SizeLimitExceeded", "successor set too wide to enumerate");
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (keep_ok(static_cast<std::size_t>(std::popcount(mask)), k)) subsets.push_back(mask);
  }
  // Larger kept sets first, so the identity comes out first.
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });
  std::vector<std::vector<NodeIndex>> out;
  for (auto mask : subsets) {
    std::vector<std::vector<NodeIndex>> acc{{i}};
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask >> j & 1u)) continue;
      std::vector<std::vector<NodeIndex>> next;
      for (const auto& a : acc) {
        for (const auto& b : child[j]) {
          auto c = a;
          c.insert(c.end(), b.begin(), b.end());
          next.push_back(std::move(c));
          if (next.size() > cap) throw Error("SizeLimitExceeded", "subtree enumeration");
        }
      }
      acc = std::move(next);
    }
    for (auto& a : acc) {
      out.push_back(std::move(a));
      if (out.size() > cap) throw Error("SizeLimitExceeded", "subtree enumeration");
    }
  }
  return out;
}

std::vector<WfTree> to_trees(const WfTree& host, std::vector<std::vector<NodeIndex>> cs) {
  std::vector<WfTree> out;
  out.reserve(cs.size());
  for (const auto& c : cs) {
    NodeMask m(host.size(), 0);
    for (auto i : c) m[static_cast<std::size_t>(i)] = 1;
    out.push_back(host.induced(m));
  }
  return out;
}

}  // namespace

std::vector<WfTree> enumerate_sb(const WfTree& host, std::uint32_t budget, std::size_t cap) {
  auto ok = [budget](std::size_t kept, std::size_t total) { return kept >= 1 && total - kept <= budget; };
  return to_trees(host, cones(host, 0, ok, cap));
}

std::vector<WfTree> enumerate_psb(const WfTree& host, std::uint32_t keep_min, std::size_t cap) {
  auto ok = [keep_min](std::size_t kept, std::size_t) { return kept >= keep_min; };
  return to_trees(host, cones(host, 0, ok, cap));
}

// ---------------------------------------------------------------------------
// Samplers

WfTree sample_psb(const WfTree& host, std::uint32_t keep_min, std::mt19937_64& rng) {
  NodeMask keep(host.size(), 0);
  keep[0] = 1;
  for (std::size_t i = 0; i < host.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    if (!keep[i] || !host.has_successors(idx)) continue;
    std::vector<NodeIndex> succ(host.successors(idx).begin(), host.successors(idx).end());
    std::shuffle(succ.begin(), succ.end(), rng);
    std::uniform_int_distribution<std::size_t> count(std::min<std::size_t>(keep_min, succ.size()), succ.size());
    auto c = count(rng);
    for (std::size_t j = 0; j < c; ++j) keep[static_cast<std::size_t>(succ[j])] = 1;
  }
  return host.induced(keep);
}

SbWitness sample_pruning(const WfTree& host, std::uint32_t budget, std::mt19937_64& rng) {
  SbWitness w;
  NodeMask keep(host.size(), 0);
  keep[0] = 1;
  for (std::size_t i = 0; i < host.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    if (!keep[i] || !host.has_successors(idx)) continue;
    std::vector<NodeIndex> succ(host.successors(idx).begin(), host.successors(idx).end());
    std::shuffle(succ.begin(), succ.end(), rng);
    auto most = std::min<std::size_t>(budget, succ.size() - 1);
    auto drop = std::uniform_int_distribution<std::size_t>(0, most)(rng);
    for (std::size_t j = 0; j < succ.size(); ++j) {
      if (j < drop) {
        w.pruned[host.node(idx)].push_back(host.node(succ[j]));
      } else {
        keep[static_cast<std::size_t>(succ[j])] = 1;
      }
    }
  }
  for (auto& [at, drop] : w.pruned) std::sort(drop.begin(), drop.end());
  return w;
}

std::vector<Node> sample_front(const WfTree& t, std::mt19937_64& rng, bool avoid_root) {
  std::vector<Node> out;
  std::bernoulli_distribution stop(0.5);
  std::vector<NodeIndex> stack{0};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    bool forced = i == 0 && avoid_root;
    if (!t.has_successors(i) || (!forced && stop(rng))) {
      out.push_back(t.node(i));
      continue;
    }
    for (auto s : t.successors(i)) stack.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wft
