#include <doctest.h>

#include <random>

#include "brute.hpp"
#include "wft/oracle.hpp"
#include "wft/partition.hpp"
#include "wft/subtree.hpp"

using namespace wft;

namespace {

WfTree t44() { return WfTree::uniform(Node{}, 4, 2); }

// c(a) = c(b) exactly when some member of `front` lies below both leaves.
bool brute_canonical(const WfTree& t, const Coloring& c, const std::vector<Node>& front) {
  auto leaves = t.maximal();
  for (const auto& a : leaves) {
    for (const auto& b : leaves) {
      bool shared = std::any_of(front.begin(), front.end(),
                                [&](const Node& r) { return r.is_prefix_of(a) && r.is_prefix_of(b); });
      if ((c.at(a) == c.at(b)) != shared) return false;
    }
  }
  return true;
}

// Some positive subtree on which Y lands entirely inside Z, or entirely outside.
bool brute_monochromatic(const std::vector<brute::NodeSet>& psbs, const std::vector<Node>& ys,
                         const brute::NodeSet& zs, bool side) {
  for (const auto& s : psbs) {
    bool ok = true;
    for (const auto& y : ys) {
      if (s.count(y) && (zs.count(y) != 0) != side) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

Coloring color_by(const WfTree& t, const std::function<std::uint64_t(const Node&)>& f) {
  Coloring c;
  for (const auto& n : t.maximal()) c[n] = f(n);
  return c;
}

}  // namespace

TEST_CASE("decide_subset examples") {
  SurrogateParams p;
  auto t = t44();
  auto y = t.maximal();
  auto yes = decide_subset(t, y, y, p);
  CHECK(yes.side);
  CHECK(yes.subtree == t);
  std::vector<Node> none;
  auto no = decide_subset(t, y, none, p);
  CHECK_FALSE(no.side);
  CHECK(no.subtree == t);

  std::vector<Node> even;
  for (const auto& n : y) {
    if (n[1] % 2 == 0) even.push_back(n);
  }
  auto d = decide_subset(t, y, even, p);
  CHECK(d.side);
  auto mx = d.subtree.maximal();
  CHECK(mx.size() == 8);
  for (const auto& n : mx) CHECK(n[1] % 2 == 0);
  CHECK(check_psb(d.subtree, t, p));

  std::vector<Node> not_front{Node{0}};
  CHECK_THROWS_AS(decide_subset(t, not_front, none, p), Error);
}

TEST_CASE("decide_subset agrees with brute force over positive subtrees") {
  SurrogateParams p;
  std::mt19937_64 rng(21);
  auto family = enumerate_valid_trees(p.width, 2, 4, 1 << 12);
  for (const auto& t : family) {
    auto psbs = brute::psb(brute::nodes(t), p.keep_min);
    auto fronts = brute::fronts(brute::nodes(t));
    for (int trial = 0; trial < 12; ++trial) {
      const auto& y = fronts[rng() % fronts.size()];
      std::vector<Node> z;
      for (const auto& n : y) {
        if (rng() % 2) z.push_back(n);
      }
      auto d = decide_subset(t, y, z, p);
      brute::NodeSet zs(z.begin(), z.end());
      auto sub = brute::nodes(d.subtree);
      CHECK(check_psb(d.subtree, t, p));
      for (const auto& n : y) {
        if (sub.count(n)) CHECK((zs.count(n) != 0) == d.side);
      }
      CHECK(brute_monochromatic(psbs, y, zs, d.side));
      // Y stays a front of the output
      std::vector<Node> kept;
      for (const auto& n : y) {
        if (sub.count(n)) kept.push_back(n);
      }
      CHECK(brute::is_front(sub, kept));
    }
  }
}

TEST_CASE("frozen majority counts") {
  // every 2-coloring of the leaves of the 4x4 tree admits a monochromatic
  // positive subtree; the brute search over 20691 subtrees confirms a sample
  auto t = t44();
  auto psbs = brute::psb(brute::nodes(t), 2);
  CHECK(psbs.size() == 20691);
  auto y = t.maximal();
  std::size_t both = 0;
  for (std::uint32_t mask = 0; mask < (1u << 16); mask += 997) {
    brute::NodeSet z;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (mask >> i & 1u) z.insert(y[i]);
    }
    bool yes = brute_monochromatic(psbs, y, z, true);
    bool no = brute_monochromatic(psbs, y, z, false);
    CHECK((yes || no));
    both += yes && no;
  }
  CHECK(both == 57);
}

TEST_CASE("canonize examples") {
  SurrogateParams p;
  auto t = t44();
  CHECK(canonical_branching(p) == 2);
  CHECK(canonical_branching(SurrogateParams{9, 1, 2, 2}) == 3);

  auto constant = canonize(t, color_by(t, [](const Node&) { return 7; }), p);
  CHECK(constant.front == std::vector<Node>{Node{}});

  auto inj = canonize(t, color_by(t, [](const Node& n) { return n[0] * 4 + n[1]; }), p);
  CHECK(inj.front == inj.subtree.maximal());

  auto by_first = color_by(t, [](const Node& n) { return n[0]; });
  auto cf = canonize(t, by_first, p);
  CHECK(check_psb(cf.subtree, t, p));
  CHECK(cf.front == cf.subtree.successor_nodes(Node{}));
  CHECK(is_canonical(cf.subtree, by_first, cf.front));

  Coloring partial = by_first;
  partial.erase(Node{3, 3});
  CHECK_THROWS_AS(canonize(t, partial, p), Error);
  CHECK_THROWS_AS(canonize(t, by_first, SurrogateParams{4, 1, 3, 2}), Error);
}

TEST_CASE("canonize output is canonical and positive") {
  std::mt19937_64 rng(31);
  for (std::uint32_t w : {4u, 5u, 9u}) {
    SurrogateParams p{w, 1, 2, 2};
    auto keep = canonical_branching(p);
    for (std::uint32_t d = 1; d <= 2; ++d) {
      auto t = WfTree::uniform(Node{}, w, d);
      for (int trial = 0; trial < 40; ++trial) {
        auto colors = 1 + rng() % 4;
        auto c = color_by(t, [&](const Node&) { return rng() % colors; });
        auto cf = canonize(t, c, p);
        CHECK(check_psb(cf.subtree, t, SurrogateParams{w, 1, keep, 2}));
        Coloring sub;
        for (const auto& n : cf.subtree.maximal()) sub[n] = c.at(n);
        CHECK(brute_canonical(cf.subtree, sub, cf.front));
        CHECK(brute::is_front(brute::nodes(cf.subtree), cf.front));
      }
    }
  }
}

TEST_CASE("canonical_front and is_canonical agree with brute force") {
  std::mt19937_64 rng(41);
  SurrogateParams p;
  auto family = enumerate_valid_trees(p.width, 2, 4, 1 << 12);
  for (const auto& t : family) {
    auto fronts = brute::fronts(brute::nodes(t));
    for (int trial = 0; trial < 10; ++trial) {
      auto c = color_by(t, [&](const Node&) { return rng() % 3; });
      std::optional<std::vector<Node>> expect;
      for (const auto& f : fronts) {
        bool ok = brute_canonical(t, c, f);
        CHECK(is_canonical(t, c, f) == ok);
        if (ok) expect = f;
      }
      auto got = canonical_front(t, c);
      CHECK(got.has_value() == expect.has_value());
      if (got && expect) CHECK(brute::NodeSet(got->begin(), got->end()) == brute::NodeSet(expect->begin(), expect->end()));
    }
  }
}

TEST_CASE("uniformize examples") {
  SurrogateParams p;
  auto t = t44();
  auto y = t.maximal();

  auto u = uniformize(t, y, color_by(t, [](const Node&) { return 5; }), p);
  CHECK(u.front == std::vector<Node>{Node{}});
  CHECK(u.h.at(Node{}) == 5);

  auto inj_c = color_by(t, [](const Node& n) { return 10 * n[0] + n[1]; });
  auto inj = uniformize(t, y, inj_c, p);
  CHECK(inj.front == inj.subtree.maximal());
  for (const auto& n : inj.front) CHECK(inj.h.at(n) == inj_c.at(n));

  auto first = uniformize(t, y, color_by(t, [](const Node& n) { return n[0]; }), p);
  CHECK(first.front == first.subtree.successor_nodes(Node{}));
  for (const auto& n : first.front) CHECK(first.h.at(n) == n[0]);

  std::vector<Node> not_front{Node{1}};
  CHECK_THROWS_AS(uniformize(t, not_front, inj_c, p), Error);
}

TEST_CASE("uniformize on a level-1 front") {
  SurrogateParams p;
  auto t = t44();
  std::mt19937_64 rng(51);
  auto y = t.successor_nodes(Node{});
  for (int trial = 0; trial < 30; ++trial) {
    Coloring h;
    for (const auto& n : y) h[n] = rng() % 3;
    auto u = uniformize(t, y, h, p);
    CHECK(check_psb(u.subtree, t, p));
    std::set<std::uint64_t> seen;
    for (const auto& r : u.front) seen.insert(u.h.at(r));
    CHECK(seen.size() == u.front.size());
    for (const auto& r : u.front) {
      for (const auto& n : y) {
        if (u.subtree.contains(n) && r.is_prefix_of(n)) CHECK(h.at(n) == u.h.at(r));
      }
    }
  }
}

TEST_CASE("check_family examples") {
  auto fan = WfTree::uniform(Node{}, 4, 1);
  auto psbs = enumerate_psb(fan, 2);
  auto r = check_family(psbs, fan, FamilyMode::big, 100, 1);
  CHECK(r.ok);
  CHECK(r.exhaustive);
  CHECK(r.checked == 16);

  auto t33 = WfTree::uniform(Node{}, 3, 2);
  auto big = check_family(enumerate_psb(t33, 2), t33, FamilyMode::big, 100, 1);
  CHECK(big.ok);
  CHECK(big.checked == 512);

  auto only = check_family({fan}, fan, FamilyMode::big, 100, 1);
  CHECK_FALSE(only.ok);
  CHECK_FALSE(only.counterexamples.empty());
  auto nothing = check_family({}, fan, FamilyMode::large, 10, 1);
  CHECK_FALSE(nothing.ok);
}
