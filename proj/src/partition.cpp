#include "wft/partition.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "wft/subtree.hpp"

namespace wft {

namespace {

NodeMask front_mask(const WfTree& t, std::span<const Node> ys) {
  auto m = t.mask_of(ys);
  if (!is_antichain(ys) || !meets_every_branch(t, m)) throw Error("NotFront", "Y is not a front of the tree");
  return m;
}

// Nodes at or below some member of the mask.
NodeMask at_or_below(const WfTree& t, const NodeMask& ys) {
  NodeMask m(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!ys[i]) continue;
    for (NodeIndex j = static_cast<NodeIndex>(i); j >= 0 && !m[static_cast<std::size_t>(j)]; j = t.parent(j)) {
      m[static_cast<std::size_t>(j)] = 1;
    }
  }
  return m;
}

}  // namespace

std::vector<Node> DecisionResult::y_of(const Node& nu, std::span<const Node> ys) const {
  std::vector<Node> out;
  for (const auto& y : ys) {
    if (nu.is_prefix_of(y) && subtree.contains(y)) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DecisionResult decide_subset(const WfTree& t, std::span<const Node> ys, std::span<const Node> zs,
                             const SurrogateParams& p) {
  auto ym = front_mask(t, ys);
  auto zm = t.mask_of(zs);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (zm[i] && !ym[i]) throw Error("NotSubset", t.node(static_cast<NodeIndex>(i)).to_string() + " is not in Y");
  }
  const std::size_t n = t.size();
  auto below = at_or_below(t, ym);
  std::vector<char> tv(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    if (!below[i]) continue;
    if (ym[i]) {
      tv[i] = zm[i];
      continue;
    }
    auto succ = t.successors(static_cast<NodeIndex>(i));
    std::size_t yes = 0;
    for (auto s : succ) yes += tv[static_cast<std::size_t>(s)];
    tv[i] = yes >= (succ.size() + 1) / 2;
  }

  NodeMask keep(n, 0);
  keep[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    auto idx = static_cast<NodeIndex>(i);
    auto succ = t.successors(idx);
    if (!below[i] || ym[i]) {
      for (auto s : succ) keep[static_cast<std::size_t>(s)] = 1;
      continue;
    }
    std::size_t kept = 0;
    for (auto s : succ) {
      if (tv[static_cast<std::size_t>(s)] == tv[i]) {
        keep[static_cast<std::size_t>(s)] = 1;
        ++kept;
      }
    }
    if (kept < p.keep_min) {
      throw Error("WidthTooSmall", "majority at " + t.node(idx).to_string() + " keeps " + std::to_string(kept) +
                                       " successors, below keep_min");
    }
  }

  DecisionResult r;
  r.side = tv[0] != 0;
  r.subtree = t.induced(keep);
  for (std::size_t i = 0; i < n; ++i) {
    if (below[i]) r.trace.emplace(t.node(static_cast<NodeIndex>(i)), tv[i] != 0);
  }
  return r;
}

std::uint32_t canonical_branching(const SurrogateParams& p) {
  auto r = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(p.width)));
  while ((r + 1) * (r + 1) <= p.width) ++r;
  while (r * r > p.width) --r;
  return std::max<std::uint32_t>(2, r);
}

namespace {

using ColorSet = std::vector<std::uint64_t>;  // sorted

struct Candidate {
  ColorSet colors;
  std::vector<NodeIndex> cone;  // kept nodes, the candidate's root first
};

constexpr std::size_t kMaxCandidates = 64;
constexpr std::size_t kMaxFound = 256;
constexpr std::size_t kSearchSteps = 200000;

bool disjoint(const ColorSet& a, const ColorSet& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    (a[i] < b[j]) ? ++i : ++j;
  }
  return true;
}

ColorSet merge(const ColorSet& a, const ColorSet& b) {
  ColorSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Keeps the candidate list short: one per color set, smaller sets first.
void add_candidate(std::map<ColorSet, Candidate>& pool, Candidate c) {
  auto it = pool.find(c.colors);
  if (it == pool.end()) {
    pool.emplace(c.colors, std::move(c));
  } else if (c.cone.size() > it->second.cone.size()) {
    it->second = std::move(c);
  }
}

std::vector<Candidate> trim(std::map<ColorSet, Candidate> pool) {
  std::vector<Candidate> out;
  for (auto& [k, v] : pool) out.push_back(std::move(v));
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.colors.size() != b.colors.size()) return a.colors.size() < b.colors.size();
    return a.cone.size() > b.cone.size();
  });
  if (out.size() > kMaxCandidates) out.resize(kMaxCandidates);
  return out;
}

class Canonizer {
 public:
  Canonizer(const WfTree& t, const Coloring& c, std::uint32_t s) : t_(t), c_(c), s_(s), cands_(t.size()) {}

  std::vector<Candidate> run() {
    for (std::size_t i = t_.size(); i-- > 0;) {
      solve(static_cast<NodeIndex>(i));
      for (auto ch : t_.successors(static_cast<NodeIndex>(i))) {
        cands_[static_cast<std::size_t>(ch)].clear();
      }
    }
    return cands_[0];
  }

 private:
  void solve(NodeIndex v) {
    auto succ = t_.successors(v);
    auto vi = static_cast<std::size_t>(v);
    if (succ.empty()) {
      auto it = c_.find(t_.node(v));
      if (it == c_.end()) throw Error("NotTotal", "no color for " + t_.node(v).to_string());
      cands_[vi] = {Candidate{{it->second}, {v}}};
      return;
    }
    if (succ.size() < s_) {
      throw Error("WidthTooSmall", t_.node(v).to_string() + " has fewer successors than the canonical branching");
    }
    std::map<ColorSet, Candidate> pool;

    // All kept successors constant with one shared color.
    std::map<std::uint64_t, std::vector<std::pair<NodeIndex, const Candidate*>>> by_color;
    for (auto ch : succ) {
      for (const auto& cd : cands_[static_cast<std::size_t>(ch)]) {
        if (cd.colors.size() == 1) by_color[cd.colors[0]].push_back({ch, &cd});
      }
    }
    for (const auto& [color, members] : by_color) {
      if (members.size() < s_) continue;
      Candidate cd{{color}, {v}};
      for (const auto& [ch, src] : members) cd.cone.insert(cd.cone.end(), src->cone.begin(), src->cone.end());
      add_candidate(pool, std::move(cd));
    }

    // Pairwise-disjoint color sets over at least s successors.
    std::vector<std::pair<NodeIndex, const Candidate*>> chosen;
    std::size_t steps = 0;
    std::size_t found = 0;
    auto emit = [&] {
      ColorSet used;
      for (const auto& [ch, cd] : chosen) used = merge(used, cd->colors);
      {
        Candidate bare{used, {v}};
        auto picks = chosen;
        std::sort(picks.begin(), picks.end());
        for (const auto& [ch, cd] : picks) bare.cone.insert(bare.cone.end(), cd->cone.begin(), cd->cone.end());
        add_candidate(pool, std::move(bare));
      }
      // Extend greedily with any further successor that stays disjoint.
      auto picks = chosen;
      for (auto ch : succ) {
        if (std::any_of(picks.begin(), picks.end(), [&](const auto& pr) { return pr.first == ch; })) continue;
        for (const auto& cd : cands_[static_cast<std::size_t>(ch)]) {
          if (disjoint(used, cd.colors)) {
            used = merge(used, cd.colors);
            picks.push_back({ch, &cd});
            break;
          }
        }
      }
      Candidate out{used, {v}};
      std::sort(picks.begin(), picks.end());
      for (const auto& [ch, cd] : picks) out.cone.insert(out.cone.end(), cd->cone.begin(), cd->cone.end());
      add_candidate(pool, std::move(out));
      ++found;
    };
    auto dfs = [&](auto&& self, std::size_t from, const ColorSet& used) -> void {
      if (found >= kMaxFound || ++steps > kSearchSteps) return;
      if (chosen.size() == s_) {
        emit();
        return;
      }
      for (std::size_t j = from; j < succ.size(); ++j) {
        if (succ.size() - j < s_ - chosen.size()) return;
        for (const auto& cd : cands_[static_cast<std::size_t>(succ[j])]) {
          if (!disjoint(used, cd.colors)) continue;
          chosen.push_back({succ[j], &cd});
          self(self, j + 1, merge(used, cd.colors));
          chosen.pop_back();
          if (found >= kMaxFound || steps > kSearchSteps) return;
        }
      }
    };
    dfs(dfs, 0, {});
    cands_[vi] = trim(std::move(pool));
  }

  const WfTree& t_;
  const Coloring& c_;
  std::uint32_t s_;
  std::vector<std::vector<Candidate>> cands_;
};

// colors[i]: single color of the cone at i, or nullopt when the cone is mixed.
std::vector<std::optional<std::uint64_t>> cone_colors(const WfTree& t, const Coloring& c) {
  std::vector<std::optional<std::uint64_t>> col(t.size());
  std::vector<char> mixed(t.size(), 0);
  for (std::size_t i = t.size(); i-- > 0;) {
    auto idx = static_cast<NodeIndex>(i);
    auto succ = t.successors(idx);
    if (succ.empty()) {
      auto it = c.find(t.node(idx));
      if (it == c.end()) throw Error("NotTotal", "no color for " + t.node(idx).to_string());
      col[i] = it->second;
      continue;
    }
    for (auto s : succ) {
      auto si = static_cast<std::size_t>(s);
      if (mixed[si] || (col[i] && col[si] != col[i])) {
        mixed[i] = 1;
        break;
      }
      col[i] = col[si];
    }
    if (mixed[i]) col[i].reset();
  }
  return col;
}

}  // namespace

bool is_canonical(const WfTree& t, const Coloring& c, std::span<const Node> front) {
  auto fm = t.mask_of(front);
  if (!is_antichain(front) || !meets_every_branch(t, fm)) return false;
  // Leaves grouped by their front ancestor must be constant within a group
  // and differ across groups.
  std::map<std::uint64_t, NodeIndex> owner;
  std::vector<NodeIndex> anc(t.size(), -1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    if (fm[i]) {
      anc[i] = idx;
    } else if (i > 0) {
      anc[i] = anc[static_cast<std::size_t>(t.parent(idx))];
    }
  }
  for (auto leaf : t.maximal_indices()) {
    auto it = c.find(t.node(leaf));
    if (it == c.end()) throw Error("NotTotal", "no color for " + t.node(leaf).to_string());
    auto a = anc[static_cast<std::size_t>(leaf)];
    auto [pos, fresh] = owner.emplace(it->second, a);
    if (!fresh && pos->second != a) return false;
  }
  std::map<NodeIndex, std::uint64_t> group;
  for (auto leaf : t.maximal_indices()) {
    auto v = c.at(t.node(leaf));
    auto [pos, fresh] = group.emplace(anc[static_cast<std::size_t>(leaf)], v);
    if (!fresh && pos->second != v) return false;
  }
  return true;
}

std::optional<std::vector<Node>> canonical_front(const WfTree& t, const Coloring& c) {
  auto col = cone_colors(t, c);
  std::vector<Node> front;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!col[i]) continue;
    auto idx = static_cast<NodeIndex>(i);
    if (i == 0 || !col[static_cast<std::size_t>(t.parent(idx))]) front.push_back(t.node(idx));
  }
  if (!is_canonical(t, c, front)) return std::nullopt;
  return front;
}

CanonicalForm canonize(const WfTree& t, const Coloring& c, const SurrogateParams& p) {
  auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(p.width)));
  while (root * root > p.width) --root;
  if (root < 2) throw Error("WidthTooSmall", "floor(sqrt(width)) < 2");
  auto s = canonical_branching(p);
  if (p.keep_min > s) throw Error("WidthTooSmall", "keep_min exceeds the canonical branching");

  Canonizer engine(t, c, s);
  auto cands = engine.run();
  if (cands.empty()) throw Error("CanonizationFailed", "no canonical thinning within the search bounds");
  const auto& best = cands.front();
  NodeMask keep(t.size(), 0);
  for (auto i : best.cone) keep[static_cast<std::size_t>(i)] = 1;

  CanonicalForm out;
  out.subtree = t.induced(keep);
  auto front = canonical_front(out.subtree, c);
  if (!front) throw Error("CanonizationFailed", "canonical biconditional does not hold on the thinned tree");
  out.front = std::move(*front);
  auto col = cone_colors(out.subtree, c);
  for (std::size_t i = 0; i < out.subtree.size(); ++i) {
    out.k.emplace(out.subtree.node(static_cast<NodeIndex>(i)), col[i] ? *col[i] + 1 : 0);
  }
  return out;
}

Uniformized uniformize(const WfTree& t, std::span<const Node> ys, const Coloring& h, const SurrogateParams& p) {
  auto ym = front_mask(t, ys);
  auto base = below_front(t, ys);
  Coloring on_front;
  for (const auto& y : ys) {
    auto it = h.find(y);
    if (it == h.end()) throw Error("NotTotal", "no value for " + y.to_string());
    on_front.emplace(y, it->second);
  }
  auto cf = canonize(base, on_front, p);

  NodeMask keep(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    if (cf.subtree.contains(t.node(idx))) {
      keep[i] = 1;
    } else if (i > 0) {
      auto par = static_cast<std::size_t>(t.parent(idx));
      // Whole cones above kept members of Y.
      keep[i] = keep[par] && (ym[par] || !cf.subtree.contains(t.node(t.parent(idx))));
    }
  }
  Uniformized u;
  u.subtree = t.induced(keep);
  u.front = cf.front;
  for (const auto& rho : cf.front) {
    for (const auto& y : ys) {
      if (rho.is_prefix_of(y) && cf.subtree.contains(y)) {
        u.h.emplace(rho, on_front.at(y));
        break;
      }
    }
  }
  return u;
}

namespace {

bool handles(const WfTree& b, const Coloring& c, FamilyMode mode) {
  if (mode == FamilyMode::large) return canonical_front(b, c).has_value();
  std::optional<std::uint64_t> seen;
  for (auto leaf : b.maximal_indices()) {
    auto v = c.at(b.node(leaf));
    if (seen && *seen != v) return false;
    seen = v;
  }
  return true;
}

// Number of set partitions of n elements, saturating at `cap`.
std::size_t bell_capped(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> row{1};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (auto x : row) next.push_back(std::min(cap + 1, next.back() + x));
    row = std::move(next);
  }
  return row.front();
}

}  // namespace

FamilyReport check_family(const std::vector<WfTree>& tset, const WfTree& t, FamilyMode mode, std::size_t trials,
                          std::uint64_t seed, std::size_t exhaustive_bound, std::size_t max_counterexamples) {
  FamilyReport r;
  auto leaves = t.maximal();
  const std::size_t n = leaves.size();
  auto test = [&](const std::vector<std::uint64_t>& values) {
    Coloring c;
    for (std::size_t i = 0; i < n; ++i) c.emplace(leaves[i], values[i]);
    ++r.checked;
    bool ok = std::any_of(tset.begin(), tset.end(), [&](const WfTree& b) { return handles(b, c, mode); });
    if (!ok) {
      r.ok = false;
      r.counterexamples.push_back(std::move(c));
    }
    return r.counterexamples.size() < max_counterexamples;
  };

  std::vector<std::uint64_t> values(n, 0);
  if (mode == FamilyMode::big) {
    if (n < 63 && (std::size_t{1} << n) <= exhaustive_bound) {
      r.exhaustive = true;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        for (std::size_t i = 0; i < n; ++i) values[i] = m >> i & 1u;
        if (!test(values)) break;
      }
      return r;
    }
  } else if (bell_capped(n, exhaustive_bound) <= exhaustive_bound) {
    // Restricted growth strings enumerate colorings up to renaming.
    r.exhaustive = true;
    std::vector<std::uint64_t> mx(n, 0);
    while (true) {
      if (!test(values)) break;
      std::size_t i = n;
      while (i-- > 1) {
        if (values[i] <= mx[i - 1]) break;
      }
      if (i == 0 || n == 0) break;
      ++values[i];
      for (std::size_t j = i + 1; j < n; ++j) values[j] = 0;
      for (std::size_t j = i; j < n; ++j) mx[j] = std::max(mx[j - 1], values[j]);
    }
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, mode == FamilyMode::big ? 1 : (n ? n - 1 : 0));
  for (std::size_t k = 0; k < trials; ++k) {
    for (auto& v : values) v = pick(rng);
    if (!test(values)) break;
  }
  return r;
}

}  // namespace wft
