#include "wft/system.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "wft/subtree.hpp"

namespace wft {

std::vector<WfTree> ApproxSystem::top_family() const {
  std::vector<WfTree> out;
  auto it = families.find(root);
  if (it == families.end()) return out;
  for (const auto& b : it->second) {
    if (!b.is_singleton()) out.push_back(b);
  }
  return out;
}

bool ApproxSystem::in_top_family(const WfTree& b) const {
  auto it = families.find(root);
  return !b.is_singleton() && it != families.end() && it->second.count(b) != 0;
}

std::size_t ApproxSystem::size() const {
  std::size_t n = ground.size();
  for (const auto& [at, fam] : families) n += fam.size();
  return n;
}

std::optional<WfTree> ApproxSystem::maximum() const {
  auto top = top_family();
  for (const auto& b : top) {
    if (std::all_of(top.begin(), top.end(), [&](const WfTree& c) { return leq(c, b); })) return b;
  }
  return std::nullopt;
}

bool ApproxSystem::is_maximal(const WfTree& b) const {
  if (!in_top_family(b)) return false;
  for (const auto& c : top_family()) {
    if (c != b && leq(b, c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

ValidationReport validate_system(const ApproxSystem& x, const SurrogateParams& p) {
  ValidationReport r;
  auto fail = [&](const char* clause, std::vector<Node> w, std::string detail) {
    r.violations.push_back({clause, std::move(w), std::move(detail)});
  };

  // (a) a rooted ground set closed under prefixes above the root.
  if (!x.ground.count(x.root)) fail("a", {x.root}, "root is not in the ground");
  for (const auto& n : x.ground) {
    if (!x.root.is_prefix_of(n)) {
      fail("a", {n}, "node does not extend the root");
    } else if (n != x.root && !x.ground.count(n.prefix(n.length() - 1))) {
      fail("a", {n}, "parent is not in the ground");
    }
  }
  // (b) families indexed by ground nodes.
  for (const auto& [at, fam] : x.families) {
    if (!x.ground.count(at)) fail("b", {at}, "family at a node outside the ground");
  }
  for (const auto& [at, fam] : x.families) {
    for (const auto& b : fam) {
      // (c) trees inside the ground with positive branching.
      for (std::size_t i = 0; i < b.size(); ++i) {
        auto idx = static_cast<NodeIndex>(i);
        if (!x.ground.count(b.node(idx))) {
          fail("c", {at, b.node(idx)}, "tree node outside the ground");
          break;
        }
        if (b.has_successors(idx) && b.successors(idx).size() < p.keep_min) {
          fail("c", {at, b.node(idx)}, "fewer than keep_min successors");
          break;
        }
      }
      // (d)
      if (b.root() != at) fail("d", {at, b.root()}, "tree root differs from its index");
      // (h)
      for (const auto& nu : b.nodes()) {
        if (nu == at) continue;
        auto it = x.families.find(nu);
        if (it == x.families.end() || !it->second.count(restrict(b, nu))) {
          fail("h", {at, nu}, "restriction missing from the family at the node");
        }
      }
    }
  }
  // (e)
  for (const auto& n : x.ground) {
    auto it = x.families.find(n);
    if (it == x.families.end() || !it->second.count(WfTree::singleton(n))) {
      fail("e", {n}, "singleton tree missing");
    }
  }
  // (f) a directed partial order on the root family.
  auto top = x.top_family();
  for (const auto& [a, b] : x.order) {
    if (!x.in_top_family(a) || !x.in_top_family(b)) fail("f", {a.root()}, "order pair outside the root family");
  }
  for (const auto& a : top) {
    if (!x.leq(a, a)) fail("f", {a.root()}, "order is not reflexive");
    for (const auto& b : top) {
      if (a != b && x.leq(a, b) && x.leq(b, a)) fail("f", {a.root()}, "order is not antisymmetric");
      for (const auto& c : top) {
        if (x.leq(a, b) && x.leq(b, c) && !x.leq(a, c)) fail("f", {a.root()}, "order is not transitive");
      }
      bool bounded = std::any_of(top.begin(), top.end(), [&](const WfTree& c) { return x.leq(a, c) && x.leq(b, c); });
      if (!bounded) fail("f", {a.root()}, "two members without a common upper bound");
    }
  }
  // (g)
  for (const auto& [a, b] : x.order) {
    if (a == b) continue;
    try {
      if (!leq_star(a, b, p).holds) fail("g", {a.root()}, "ordered pair fails leq_star");
    } catch (const Error& e) {
      fail("g", {a.root()}, e.what());
    }
  }
  return r;
}

bool leq_K(const ApproxSystem& x, const ApproxSystem& y) {
  if (x.root != y.root) return false;
  if (!std::includes(y.ground.begin(), y.ground.end(), x.ground.begin(), x.ground.end())) return false;
  for (const auto& [at, fam] : x.families) {
    auto it = y.families.find(at);
    if (it == y.families.end()) return false;
    if (!std::includes(it->second.begin(), it->second.end(), fam.begin(), fam.end())) return false;
  }
  // (d): the order of y restricted to the root family of x is the order of x.
  auto top = x.top_family();
  for (const auto& a : top) {
    for (const auto& b : top) {
      if (x.leq(a, b) != y.leq(a, b)) return false;
    }
  }
  return true;
}

ApproxSystem chain_union(const std::vector<ApproxSystem>& xs) {
  if (xs.empty()) throw Error("NotIncreasing", "empty chain");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!leq_K(xs[i - 1], xs[i])) throw Error("NotIncreasing", "position " + std::to_string(i));
  }
  ApproxSystem u = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    u.ground.insert(xs[i].ground.begin(), xs[i].ground.end());
    for (const auto& [at, fam] : xs[i].families) u.families[at].insert(fam.begin(), fam.end());
    u.order.insert(xs[i].order.begin(), xs[i].order.end());
  }
  return u;
}

ApproxSystem seed_system() {
  ApproxSystem x;
  x.root = Node{};
  x.ground.insert(x.root);
  x.families[x.root].insert(WfTree::singleton(x.root));
  return x;
}

namespace {

void add_with_restrictions(ApproxSystem& x, const WfTree& b) {
  for (const auto& nu : b.nodes()) {
    x.ground.insert(nu);
    x.families[nu].insert(nu == b.root() ? b : restrict(b, nu));
  }
}

void put_on_top(ApproxSystem& x, const WfTree& b) {
  for (const auto& c : x.top_family()) x.order.insert({c, b});
}

std::vector<Node> fresh_children(const ApproxSystem& x, const Node& eta, std::uint32_t count) {
  std::vector<Node> out;
  for (Node::value_type d = 0; out.size() < count; ++d) {
    auto c = eta.child(d);
    if (!x.ground.count(c)) out.push_back(c);
  }
  return out;
}

}  // namespace

ApproxSystem sprout(const ApproxSystem& x, const Node& eta, const SurrogateParams& p) {
  if (!x.ground.count(eta)) throw Error("NodeNotInTree", eta.to_string());
  auto it = x.families.find(eta);
  if (it == x.families.end() || it->second.size() != 1) {
    throw Error("FamilyNotSingleton", "family at " + eta.to_string() + " is not {{eta}}");
  }
  ApproxSystem y = x;
  auto kids = fresh_children(x, eta, p.width);
  std::vector<Node> nodes{eta};
  nodes.insert(nodes.end(), kids.begin(), kids.end());
  auto fan = WfTree::from_nodes(nodes);
  for (const auto& k : kids) {
    y.ground.insert(k);
    y.families[k].insert(WfTree::singleton(k));
  }
  y.families[eta].insert(fan);
  if (eta == x.root) y.order = {{fan, fan}};
  return y;
}

ApproxSystem amalgamate(const ApproxSystem& x, const SurrogateParams& p, const std::vector<WfTree>& chain) {
  auto top = x.top_family();
  if (top.empty()) throw Error("PreconditionFailed", "root family is empty");
  if (chain.empty()) {
    if (x.maximum()) return x;
    throw Error("PreconditionFailed", "no maximum and no chain supplied");
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!x.in_top_family(chain[i])) throw Error("PreconditionFailed", "chain member not in the root family");
    if (i && !x.leq(chain[i - 1], chain[i])) throw Error("PreconditionFailed", "chain is not increasing");
  }

  const std::vector<Node> rho(x.ground.begin(), x.ground.end());
  std::vector<Node> nus;
  std::vector<WfTree> sources;
  // Diagonal picks run along the chain, then keep drawing from its last member.
  for (std::size_t i = 0;; ++i) {
    const WfTree& b = chain[std::min(i, chain.size() - 1)];
    auto succ = b.successor_nodes(b.root());
    // Prefer nodes every chain member shares.
    std::stable_partition(succ.begin(), succ.end(), [&](const Node& n) {
      return std::all_of(chain.begin(), chain.end(), [&](const WfTree& c) { return c.contains(n); });
    });
    std::optional<Node> pick;
    for (const auto& cand : succ) {
      bool ok = std::none_of(nus.begin(), nus.end(), [&](const Node& v) { return v.comparable(cand); });
      for (std::size_t l = 0; ok && l < i && l < rho.size(); ++l) {
        if (rho[l] != x.root && rho[l].comparable(cand)) ok = false;
      }
      if (ok) {
        pick = cand;
        break;
      }
    }
    if (!pick) {
      if (i < chain.size() || nus.size() < p.keep_min) {
        throw Error("DiagonalExhausted", "no diagonal node at step " + std::to_string(i));
      }
      break;
    }
    nus.push_back(*pick);
    sources.push_back(b);
  }
  std::vector<Node> nodes{x.root};
  for (std::size_t i = 0; i < nus.size(); ++i) {
    auto cone = restrict(sources[i], nus[i]);
    nodes.insert(nodes.end(), cone.nodes().begin(), cone.nodes().end());
  }
  auto bstar = WfTree::from_nodes(nodes);
  for (const auto& b : top) {
    if (!leq_star(b, bstar, p).holds) {
      throw Error("AmalgamationFailed", "diagonal tree is not above a member rooted at " + b.root().to_string());
    }
  }
  ApproxSystem y = x;
  add_with_restrictions(y, bstar);
  put_on_top(y, bstar);
  return y;
}

ApproxSystem maximalize(const ApproxSystem& x, const WfTree& b, const SurrogateParams& p) {
  if (!x.is_maximal(b)) throw Error("NotMaximal", "tree is not maximal in the root family");
  const std::vector<Node> rho(x.ground.begin(), x.ground.end());
  const std::size_t n = b.size();
  std::vector<std::vector<NodeIndex>> chosen(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto eta_i = static_cast<NodeIndex>(i);
    if (!b.has_successors(eta_i)) continue;
    const Node& eta = b.node(eta_i);
    std::set<Node::value_type> dirs;
    for (auto s : b.successors(eta_i)) {
      const Node& cand = b.node(s);
      const std::size_t step = chosen[i].size();
      if (dirs.count(cand.direction_from(eta))) continue;
      bool ok = true;
      for (std::size_t k = 0; ok && k < step && k < rho.size(); ++k) {
        if (!rho[k].is_prefix_of(eta) && rho[k].comparable(cand)) ok = false;
      }
      if (!ok) continue;
      dirs.insert(cand.direction_from(eta));
      chosen[i].push_back(s);
    }
    if (chosen[i].size() < p.keep_min) {
      throw Error("DiagonalExhausted", "only " + std::to_string(chosen[i].size()) + " successors selectable at " +
                                           eta.to_string());
    }
  }
  // B_eta by downward recursion.
  std::vector<std::vector<Node>> cone(n);
  for (std::size_t i = n; i-- > 0;) {
    cone[i].push_back(b.node(static_cast<NodeIndex>(i)));
    for (auto s : chosen[i]) {
      auto& sub = cone[static_cast<std::size_t>(s)];
      cone[i].insert(cone[i].end(), sub.begin(), sub.end());
    }
  }
  ApproxSystem y = x;
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i].empty()) continue;
    y.families[b.node(static_cast<NodeIndex>(i))].insert(WfTree::from_nodes(cone[i]));
  }
  auto brt = WfTree::from_nodes(cone[0]);
  if (brt != b) put_on_top(y, brt);
  return y;
}

ApproxSystem adjoin(const ApproxSystem& x, const WfTree& b1, const WfTree& b2, AdjoinKind kind,
                    const SurrogateParams& p) {
  const Node& eta = b1.root();
  auto fam = x.families.find(eta);
  if (fam == x.families.end() || !fam->second.count(b1)) {
    throw Error("PreconditionFailed", "b1 is not in the family at " + eta.to_string());
  }
  ApproxSystem y = x;
  if (kind == AdjoinKind::psb) {
    if (!check_psb(b2, b1, p)) throw Error("PreconditionFailed", "b2 is not a positive subtree of b1");
    if (eta == x.root && !b1.is_singleton()) {
      if (!x.is_maximal(b1)) throw Error("PreconditionFailed", "b1 is not maximal in the root family");
      if (x.in_top_family(b2) && b2 != b1) {
        throw Error("PreconditionFailed", "b2 already sits below the maximal b1");
      }
    }
    add_with_restrictions(y, b2);
    if (eta == x.root && !b2.is_singleton()) put_on_top(y, b2);
    return y;
  }

  if (!x.in_top_family(b1)) throw Error("PreconditionFailed", "b1 is not in the root family");
  std::optional<SbWitness> w;
  try {
    w = check_sb(b2, b1, p);
  } catch (const Error& e) {
    throw Error("PreconditionFailed", std::string("b2 is not an exhaustive subtree of b1: ") + e.what());
  }
  if (!w) throw Error("PreconditionFailed", "b2 is not an exhaustive subtree of b1");
  if (x.in_top_family(b2)) return x;
  add_with_restrictions(y, b2);
  auto top = x.top_family();
  for (const auto& c : top) {
    if (x.leq(c, b1)) y.order.insert({c, b2});
  }
  y.order.insert({b2, b2});
  for (const auto& d : top) {
    if (d == b1 || !x.leq(b1, d)) continue;
    if (!leq_star(b2, d, p).holds) {
      throw Error("PreconditionFailed", "g: b2 is not below a member above b1");
    }
    y.order.insert({b2, d});
  }
  return y;
}

ApproxSystem graft(const ApproxSystem& x, const SurrogateParams&) {
  auto top = x.maximum();
  if (!top) throw Error("PreconditionFailed", "root family has no maximum");
  std::vector<Node> nodes = top->nodes();
  bool grew = false;
  for (const auto& leaf : top->maximal()) {
    auto it = x.families.find(leaf);
    if (it == x.families.end()) continue;
    for (const auto& t : it->second) {
      if (t.is_singleton()) continue;
      nodes.insert(nodes.end(), t.nodes().begin() + 1, t.nodes().end());
      grew = true;
      break;
    }
  }
  if (!grew) throw Error("PreconditionFailed", "no leaf of the maximum has a nontrivial family");
  auto b = WfTree::from_nodes(nodes);
  ApproxSystem y = x;
  add_with_restrictions(y, b);
  put_on_top(y, b);
  return y;
}

// ---------------------------------------------------------------------------
// Adjectives

namespace {

std::string describe(const Coloring& c) {
  std::string s = "{";
  for (const auto& [n, v] : c) {
    if (s.size() > 1) s += ',';
    s += n.to_string() + ":" + std::to_string(v);
  }
  return s + "}";
}

std::vector<WfTree> psb_above(const ApproxSystem& x, const WfTree& b, const SurrogateParams& p) {
  std::vector<WfTree> out;
  for (const auto& c : x.top_family()) {
    if (x.leq(b, c) && check_psb(c, b, p)) out.push_back(c);
  }
  return out;
}

}  // namespace

AdjectiveFlags check_adjectives(const ApproxSystem& x, const SurrogateParams& p, const AdjectiveOptions& opts) {
  AdjectiveFlags f;
  auto top = x.top_family();

  for (const auto& b : top) {
    if (!f.fat.value) break;
    std::vector<WfTree> sbs;
    try {
      sbs = enumerate_sb(b, p.budget, opts.subtree_cap);
    } catch (const Error&) {
      f.fat.exhaustive = false;
      continue;
    }
    for (const auto& b1 : sbs) {
      bool ok = std::any_of(top.begin(), top.end(), [&](const WfTree& b2) {
        if (!x.leq(b, b2) || !b2.subset_of(b1)) return false;
        try {
          return check_sb(b2, b1, p).has_value();
        } catch (const Error&) {
          return false;
        }
      });
      if (!ok) {
        f.fat.value = false;
        f.fat.evidence = "no refinement in the root family for an exhaustive subtree of size " +
                         std::to_string(b1.size());
        break;
      }
    }
  }

  for (auto* mode : {&f.big, &f.large}) {
    auto fm = mode == &f.big ? FamilyMode::big : FamilyMode::large;
    for (const auto& b : top) {
      auto rep = check_family(psb_above(x, b, p), b, fm, opts.trials, opts.seed, opts.coloring_bound, 1);
      if (!rep.exhaustive) mode->exhaustive = false;
      if (!rep.ok) {
        mode->value = false;
        mode->evidence = "coloring " + describe(rep.counterexamples.front()) + " of a tree with " +
                         std::to_string(b.size()) + " nodes";
        break;
      }
    }
  }

  for (const auto& [eta, fam] : x.families) {
    if (eta == x.root || !f.full.value) continue;
    for (const auto& b : fam) {
      std::vector<WfTree> ps;
      try {
        ps = enumerate_psb(b, p.keep_min, opts.subtree_cap);
      } catch (const Error&) {
        f.full.exhaustive = false;
        continue;
      }
      auto missing = std::find_if(ps.begin(), ps.end(), [&](const WfTree& t) { return !fam.count(t); });
      if (missing != ps.end()) {
        f.full.value = false;
        f.full.evidence = "positive subtree missing from the family at " + eta.to_string();
        break;
      }
    }
  }

  f.principal.value = x.maximum().has_value();
  f.principal.evidence = f.principal.value ? "root family has a maximum" : "root family has no maximum";
  return f;
}

namespace {

bool family_in_system(const ApproxSystem& x, const std::set<WfTree>& fam) {
  return std::all_of(fam.begin(), fam.end(), [&](const WfTree& b) {
    auto it = x.families.find(b.root());
    return b.root() != x.root && it != x.families.end() && it->second.count(b);
  });
}

// Some set of at most `budget` non-root ground nodes is comparable with every member of s.
bool hittable(const ApproxSystem& x, const std::vector<Node>& s, std::uint32_t budget) {
  std::function<bool(std::vector<Node>&, std::uint32_t)> go = [&](std::vector<Node>& chosen, std::uint32_t left) {
    auto open = std::find_if(s.begin(), s.end(), [&](const Node& v) {
      return std::none_of(chosen.begin(), chosen.end(), [&](const Node& r) { return r.comparable(v); });
    });
    if (open == s.end()) return true;
    if (left == 0) return false;
    for (const auto& r : x.ground) {
      if (r == x.root || !r.comparable(*open)) continue;
      chosen.push_back(r);
      bool ok = go(chosen, left - 1);
      chosen.pop_back();
      if (ok) return true;
    }
    return false;
  };
  std::vector<Node> chosen;
  return go(chosen, budget);
}

std::vector<Node> root_successors_in(const WfTree& b, const std::set<WfTree>& fam, bool inside) {
  std::vector<Node> out;
  for (const auto& nu : b.successor_nodes(b.root())) {
    if (fam.count(restrict(b, nu)) == inside) out.push_back(nu);
  }
  return out;
}

}  // namespace

bool is_dense(const ApproxSystem& x, const std::set<WfTree>& fam, const SurrogateParams& p) {
  if (!family_in_system(x, fam)) return false;
  auto top = x.top_family();
  return std::all_of(top.begin(), top.end(), [&](const WfTree& b1) {
    return std::any_of(top.begin(), top.end(), [&](const WfTree& b2) {
      return x.leq(b1, b2) && !hittable(x, root_successors_in(b2, fam, true), p.budget);
    });
  });
}

bool is_open(const ApproxSystem& x, const std::set<WfTree>& fam, const SurrogateParams& p) {
  if (!family_in_system(x, fam)) return false;
  for (const auto& b1 : fam) {
    for (const auto& b : x.families.at(b1.root())) {
      if (!fam.count(b) && leq_star(b1, b, p).holds) return false;
    }
  }
  return true;
}

bool is_good_for(const ApproxSystem& x, const std::set<WfTree>& fam, const WfTree& b1, const SurrogateParams& p) {
  auto top = x.top_family();
  return std::any_of(top.begin(), top.end(), [&](const WfTree& b2) {
    return x.leq(b1, b2) && root_successors_in(b2, fam, false).size() <= p.budget;
  });
}

// ---------------------------------------------------------------------------
// Driver

namespace {

bool capacity_error(const Error& e) {
  return e.code() == "WidthTooSmall" || e.code() == "CanonizationFailed" || e.code() == "DiagonalExhausted";
}

}  // namespace

DriverResult run_driver(std::size_t steps, const SurrogateParams& p, std::uint64_t seed) {
  if (steps == 0) throw Error("PreconditionFailed", "steps must be at least 1");
  p.check();
  DriverResult res;
  std::mt19937_64 rng(seed);
  ApproxSystem x = seed_system();
  res.history.push_back(x);

  auto note = [&](std::size_t step, const char* kind, const char* status, std::string detail) -> Obligation& {
    Obligation o;
    o.step = step;
    o.kind = kind;
    o.status = status;
    o.detail = std::move(detail);
    res.ledger.push_back(std::move(o));
    return res.ledger.back();
  };

  for (std::size_t step = 2; step <= steps; ++step) {
    try {
      if (step == 2) {
        x = sprout(x, x.root, p);
        note(step, "sprout", "discharged", "fan at the root");
        res.history.push_back(x);
        continue;
      }
      auto top = x.maximum();
      if (!top) throw Error("PreconditionFailed", "root family lost its maximum");
      const WfTree& t = *top;
      switch ((step - 3) % 6) {
        case 0: {
          x = chain_union({x, x});
          note(step, "union", "discharged", "union of the chain so far");
          break;
        }
        case 1: {
          Coloring c;
          std::bernoulli_distribution coin(0.5);
          std::vector<Node> zs;
          auto leaves = t.maximal();
          for (const auto& l : leaves) {
            c[l] = coin(rng) ? 1 : 0;
            if (c[l]) zs.push_back(l);
          }
          try {
            auto d = decide_subset(t, leaves, zs, p);
            x = adjoin(x, t, d.subtree, AdjoinKind::psb, p);
            auto& o = note(step, "big", "discharged", d.side ? "side yes" : "side no");
            o.target = t;
            o.subtree = d.subtree;
            o.coloring = c;
          } catch (const Error& e) {
            if (!capacity_error(e)) throw;
            note(step, "big", "infeasible", e.what());
          }
          break;
        }
        case 2: {
          auto leaves = t.maximal();
          std::uniform_int_distribution<std::uint64_t> val(0, leaves.size() - 1);
          Coloring c;
          for (const auto& l : leaves) c[l] = val(rng);
          try {
            auto u = uniformize(t, leaves, c, p);
            x = adjoin(x, t, u.subtree, AdjoinKind::psb, p);
            auto& o = note(step, "large", "discharged", std::to_string(u.front.size()) + " front nodes");
            o.target = t;
            o.subtree = u.subtree;
            o.coloring = c;
          } catch (const Error& e) {
            if (!capacity_error(e)) throw;
            note(step, "large", "infeasible", e.what());
          }
          break;
        }
        case 3: {
          // Fatness: prune one successor where more than keep_min remain.
          std::vector<NodeIndex> wide;
          for (std::size_t i = 0; i < t.size(); ++i) {
            if (t.successors(static_cast<NodeIndex>(i)).size() > p.keep_min) wide.push_back(static_cast<NodeIndex>(i));
          }
          if (wide.empty() || p.budget == 0) {
            note(step, "fat", "infeasible", "no successor set wider than keep_min");
          } else {
            auto at = wide[std::uniform_int_distribution<std::size_t>(0, wide.size() - 1)(rng)];
            auto succ = t.successors(at);
            auto drop = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)];
            SbWitness w;
            w.pruned[t.node(at)] = {t.node(drop)};
            auto b2 = apply_pruning(t, w);
            x = adjoin(x, t, b2, AdjoinKind::sb, p);
            auto& o = note(step, "fat", "discharged", "pruned " + t.node(drop).to_string());
            o.target = t;
            o.subtree = b2;
          }
          // Fullness at a non-root node with a nontrivial family member.
          std::vector<std::pair<Node, WfTree>> cands;
          for (const auto& [eta, fam] : x.families) {
            if (eta == x.root) continue;
            for (const auto& b : fam) {
              if (!b.is_singleton()) cands.emplace_back(eta, b);
            }
          }
          if (cands.empty()) {
            note(step, "full", "infeasible", "no nontrivial family away from the root");
          } else {
            auto [eta, b] = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
            auto b2 = sample_psb(b, p.keep_min, rng);
            x = adjoin(x, b, b2, AdjoinKind::psb, p);
            auto& o = note(step, "full", "discharged", "positive subtree at " + eta.to_string());
            o.target = b;
            o.subtree = b2;
            o.at = eta;
          }
          // The disjoint-successor demand needs intermediate ground nodes
          // below root successors of the maximum.
          auto cur = *x.maximum();
          bool intermediate = false;
          for (const auto& nu : cur.successor_nodes(cur.root())) {
            if (nu.length() > x.root.length() + 1) intermediate = true;
          }
          note(step, "clause-c", "infeasible",
               intermediate ? "intermediate nodes exist but no builder places them"
                            : "root successors are immediate; no ground node lies strictly between");
          break;
        }
        case 4: {
          try {
            x = maximalize(x, t, p);
            note(step, "maximalize", "discharged", "distinct directions at every node");
          } catch (const Error& e) {
            if (!capacity_error(e)) throw;
            note(step, "maximalize", "infeasible", e.what());
          }
          break;
        }
        case 5: {
          std::optional<Node> leaf;
          for (const auto& l : t.maximal()) {
            if (x.families.at(l).size() == 1) {
              leaf = l;
              break;
            }
          }
          if (leaf) x = sprout(x, *leaf, p);
          x = graft(x, p);
          note(step, "graft", "discharged", leaf ? "sprouted " + leaf->to_string() : "reused existing fans");
          break;
        }
      }
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(step) + ": " + e.detail());
    }
    res.history.push_back(x);
  }
  res.system = x;
  return res;
}

std::vector<std::string> replay_ledger(const ApproxSystem& x, const std::vector<Obligation>& ledger,
                                       const SurrogateParams& p) {
  std::vector<std::string> failures;
  auto top = x.top_family();
  for (const auto& o : ledger) {
    if (o.status != "discharged") continue;
    bool ok = true;
    if (o.kind == "big" || o.kind == "large") {
      ok = std::any_of(top.begin(), top.end(), [&](const WfTree& b) {
        if (!x.leq(*o.target, b) || !check_psb(b, *o.target, p)) return false;
        if (o.kind == "large") return canonical_front(b, *o.coloring).has_value();
        std::optional<std::uint64_t> seen;
        for (const auto& l : b.maximal()) {
          auto v = o.coloring->at(l);
          if (seen && *seen != v) return false;
          seen = v;
        }
        return true;
      });
    } else if (o.kind == "fat") {
      ok = std::any_of(top.begin(), top.end(), [&](const WfTree& b) {
        if (!x.leq(*o.target, b) || !b.subset_of(*o.subtree)) return false;
        try {
          return check_sb(b, *o.subtree, p).has_value();
        } catch (const Error&) {
          return false;
        }
      });
    } else if (o.kind == "full") {
      auto it = x.families.find(*o.at);
      ok = it != x.families.end() && it->second.count(*o.subtree);
    }
    if (!ok) failures.push_back("step " + std::to_string(o.step) + " " + o.kind);
  }
  return failures;
}

}  // namespace wft
