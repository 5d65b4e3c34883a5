#include <doctest.h>

#include "brute.hpp"
#include "wft/subtree.hpp"
#include "wft/system.hpp"

using namespace wft;

namespace {

SurrogateParams params() { return SurrogateParams{}; }

WfTree fan_of(const ApproxSystem& x) {
  auto top = x.top_family();
  REQUIRE(top.size() == 1);
  return top.front();
}

ApproxSystem sprouted() { return sprout(seed_system(), Node{}, params()); }

// Closure under restriction and root agreement, checked on node sets only.
bool brute_closed(const ApproxSystem& x) {
  for (const auto& [eta, fam] : x.families) {
    for (const auto& b : fam) {
      if (b.root() != eta) return false;
      for (const auto& v : b.nodes()) {
        std::vector<Node> cone;
        for (const auto& n : b.nodes()) {
          if (v.is_prefix_of(n)) cone.push_back(n);
        }
        auto it = x.families.find(v);
        if (it == x.families.end()) return false;
        bool found = std::any_of(it->second.begin(), it->second.end(), [&](const WfTree& c) {
          return brute::nodes(c) == brute::NodeSet(cone.begin(), cone.end());
        });
        if (!found) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("seed system") {
  auto x = seed_system();
  CHECK(x.size() == 2);
  CHECK(validate_system(x, params()).valid());
  CHECK(leq_K(x, x));
  CHECK(x.top_family().empty());
}

TEST_CASE("sprout examples") {
  auto p = params();
  auto x = sprouted();
  auto fan = fan_of(x);
  CHECK(fan == WfTree::uniform(Node{}, p.width, 1));
  CHECK(x.is_maximal(fan));
  CHECK(validate_system(x, p).valid());
  CHECK(leq_K(seed_system(), x));
  CHECK(x.size() == 1 + 4 + 2 + 4);

  auto y = sprout(x, Node{1}, p);
  CHECK(y.order == x.order);
  CHECK(y.families.at(Node{1}).size() == 2);
  CHECK(leq_K(x, y));
  CHECK(validate_system(y, p).valid());

  CHECK_THROWS_WITH_AS(sprout(x, Node{}, p), doctest::Contains("FamilyNotSingleton"), Error);
  CHECK_THROWS_AS(sprout(x, Node{9}, p), Error);
}

TEST_CASE("validate_system catches missing restrictions and undirected orders") {
  auto p = params();
  auto x = sprouted();
  auto broken = x;
  broken.families.at(Node{2}).clear();
  CHECK(validate_system(broken, p).violates("h"));
  CHECK_FALSE(brute_closed(broken));
  CHECK(brute_closed(x));

  auto fan = fan_of(x);
  auto left = WfTree::from_nodes({Node{}, Node{0}, Node{1}});
  auto right = WfTree::from_nodes({Node{}, Node{2}, Node{3}});
  auto y = x;
  y.families[Node{}].insert(left);
  y.families[Node{}].insert(right);
  y.order.insert({left, left});
  y.order.insert({right, right});
  y.order.insert({fan, left});
  y.order.insert({fan, right});
  auto r = validate_system(y, p);
  CHECK(r.violates("f"));
}

TEST_CASE("leq_K examples") {
  auto x = sprouted();
  CHECK(leq_K(x, x));
  auto y = sprout(x, Node{0}, params());
  CHECK(leq_K(x, y));
  CHECK_FALSE(leq_K(y, x));
  auto dropped = y;
  dropped.order.clear();
  CHECK_FALSE(leq_K(x, dropped));
}

TEST_CASE("chain_union examples") {
  auto p = params();
  auto a = seed_system();
  auto b = sprout(a, Node{}, p);
  auto c = sprout(b, Node{0}, p);
  CHECK(chain_union({a}) == a);
  CHECK(chain_union({a, b}) == b);
  auto u = chain_union({a, b, c});
  CHECK(validate_system(u, p).valid());
  for (const auto& s : {a, b, c}) CHECK(leq_K(s, u));
  CHECK_THROWS_AS(chain_union({c, a}), Error);
}

TEST_CASE("adjoin examples") {
  auto p = params();
  auto x = sprouted();
  auto fan = fan_of(x);
  CHECK(adjoin(x, fan, fan, AdjoinKind::psb, p) == x);

  auto pruned = WfTree::from_nodes({Node{}, Node{0}, Node{1}, Node{2}});
  auto y = adjoin(x, fan, pruned, AdjoinKind::sb, p);
  CHECK(y.in_top_family(pruned));
  CHECK(validate_system(y, p).valid());
  CHECK(brute_closed(y));
  CHECK(leq_K(x, y));

  auto thin = WfTree::from_nodes({Node{}, Node{1}, Node{3}});
  auto z = adjoin(x, fan, thin, AdjoinKind::psb, p);
  CHECK(z.maximum() == thin);
  CHECK(validate_system(z, p).valid());
  auto other = WfTree::from_nodes({Node{}, Node{0}, Node{2}});
  CHECK_THROWS_WITH_AS(adjoin(z, fan, other, AdjoinKind::psb, p), doctest::Contains("PreconditionFailed"), Error);
}

TEST_CASE("amalgamate examples") {
  auto p = params();
  auto x = sprouted();
  CHECK(amalgamate(x, p) == x);
  CHECK_THROWS_AS(amalgamate(seed_system(), p), Error);

  auto fan = fan_of(x);
  auto thin = WfTree::from_nodes({Node{}, Node{1}, Node{2}, Node{3}});
  auto z = adjoin(x, fan, thin, AdjoinKind::psb, p);
  auto y = amalgamate(z, p, {fan, thin});
  CHECK(validate_system(y, p).valid());
  CHECK(leq_K(z, y));
  auto top = y.maximum();
  REQUIRE(top.has_value());
  for (const auto& b : y.top_family()) {
    CHECK(y.leq(b, *top));
    CHECK(leq_star(b, *top, p).holds);
  }
  CHECK_THROWS_AS(amalgamate(z, p, {thin, fan}), Error);
}

TEST_CASE("maximalize examples") {
  auto p = params();
  auto x = sprouted();
  auto fan = fan_of(x);
  auto y = maximalize(x, fan, p);
  CHECK(y.maximum() == fan);
  CHECK(validate_system(y, p).valid());

  auto thin = WfTree::from_nodes({Node{}, Node{1}, Node{2}, Node{3}});
  auto z = adjoin(x, fan, thin, AdjoinKind::psb, p);
  CHECK_THROWS_WITH_AS(maximalize(z, fan, p), doctest::Contains("NotMaximal"), Error);
}

TEST_CASE("adjective examples") {
  auto p = params();
  auto s = check_adjectives(seed_system(), p);
  CHECK(s.fat.value);
  CHECK(s.big.value);
  CHECK(s.large.value);
  CHECK(s.full.value);
  CHECK_FALSE(s.principal.value);

  auto f = check_adjectives(sprouted(), p);
  CHECK(f.principal.value);
  // a lone fan has no monochromatic member for a nonconstant 2-coloring
  CHECK_FALSE(f.big.value);
  CHECK_FALSE(f.big.evidence.empty());
}

TEST_CASE("driver examples") {
  auto p = params();
  CHECK(run_driver(1, p, 0).system == seed_system());
  CHECK_FALSE(run_driver(2, p, 0).system.top_family().empty());

  auto r = run_driver(50, p, 0);
  CHECK(validate_system(r.system, p).valid());
  CHECK(brute_closed(r.system));
  CHECK(check_adjectives(r.system, p).principal.value);
  CHECK(replay_ledger(r.system, r.ledger, p).empty());
  CHECK(r.history.size() == 50);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(leq_K(r.history[i - 1], r.history[i]));
}
