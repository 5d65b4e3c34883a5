#include <doctest.h>

#include <random>

#include "brute.hpp"
#include "wft/oracle.hpp"
#include "wft/tree.hpp"

using namespace wft;

namespace {

SurrogateParams params() { return SurrogateParams{}; }

WfTree fan(std::uint32_t w) { return WfTree::uniform(Node{}, w, 1); }

}  // namespace

TEST_CASE("compare on the prefix order") {
  CHECK(compare(Node{}, Node{1}) == Ordering::LT);
  CHECK(compare(Node{1, 2}, Node{1}) == Ordering::GT);
  CHECK(compare(Node{1, 2}, Node{1, 2}) == Ordering::EQ);
  CHECK(compare(Node{1, 2}, Node{2}) == Ordering::INCOMPARABLE);
  CHECK(compare(Node{0, 3}, Node{0, 4}) == Ordering::INCOMPARABLE);
}

TEST_CASE("compare is a partial order on small nodes") {
  std::vector<Node> all{Node{}};
  for (std::uint32_t a = 0; a < 3; ++a) {
    all.push_back(Node{a});
    for (std::uint32_t b = 0; b < 3; ++b) {
      all.push_back(Node{a, b});
      for (std::uint32_t c = 0; c < 2; ++c) all.push_back(Node{a, b, c});
    }
  }
  auto leq = [](const Node& x, const Node& y) {
    auto o = compare(x, y);
    return o == Ordering::LT || o == Ordering::EQ;
  };
  for (const auto& x : all) {
    CHECK(compare(x, x) == Ordering::EQ);
    for (const auto& y : all) {
      auto o = compare(x, y);
      auto r = compare(y, x);
      if (o == Ordering::LT) CHECK(r == Ordering::GT);
      if (o == Ordering::INCOMPARABLE) CHECK(r == Ordering::INCOMPARABLE);
      if (o == Ordering::EQ) CHECK(x == y);
      // the prefix relation itself, computed directly on paths
      bool prefix = x.length() <= y.length() && std::equal(x.path().begin(), x.path().end(), y.path().begin());
      CHECK(leq(x, y) == prefix);
      for (const auto& z : all) {
        if (leq(x, y) && leq(y, z)) CHECK(leq(x, z));
      }
    }
  }
}

TEST_CASE("validate_cwt examples") {
  auto p = params();
  CHECK(validate_cwt(WfTree::singleton(Node{}), p).valid());

  auto two = WfTree::from_nodes({Node{}, Node{0}, Node{1}}, {Node{0}, Node{1}});
  auto r = validate_cwt(two, p);
  CHECK_FALSE(r.valid());
  CHECK(r.violates("d"));

  std::vector<Node> same_dir{Node{}};
  for (std::uint32_t j = 0; j < 4; ++j) same_dir.push_back(Node{0, j});
  auto bad = WfTree::from_nodes(same_dir);
  auto rf = validate_cwt(bad, p);
  CHECK(rf.violates("f"));
  // one obstruction at <0> blocks every successor
  std::vector<Node> obstruction{Node{0}};
  CHECK(count_avoiding(bad, Node{}, obstruction) == 0);

  CHECK(validate_cwt(WfTree::uniform(Node{}, 4, 2), p).valid());
  CHECK(validate_cwt(WfTree::uniform(Node{3, 1}, 5, 2), p).valid());
}

TEST_CASE("singleton is valid for every parameter choice") {
  for (std::uint32_t w = 2; w < 7; ++w) {
    for (std::uint32_t k = 0; k < w; ++k) {
      SurrogateParams p{w, k, 1, w};
      CHECK(validate_cwt(WfTree::singleton(Node{2, 7}), p).valid());
    }
  }
}

TEST_CASE("params check") {
  CHECK_NOTHROW(params().check());
  CHECK_THROWS_AS((SurrogateParams{4, 4, 2, 2}.check()), Error);
  CHECK_THROWS_AS((SurrogateParams{4, 1, 5, 2}.check()), Error);
  CHECK_THROWS_AS((SurrogateParams{1, 0, 1, 1}.check()), Error);
  CHECK_THROWS_AS((SurrogateParams{4, 1, 0, 2}.check()), Error);
}

TEST_CASE("from_nodes rejects non-trees") {
  CHECK_THROWS_AS(WfTree::from_nodes({}), Error);
  CHECK_THROWS_AS(WfTree::from_nodes({Node{0}, Node{1}}), Error);
}

TEST_CASE("successors skip elided levels") {
  auto t = WfTree::from_nodes({Node{}, Node{0, 1}, Node{2}, Node{2, 0, 0}});
  auto s = t.successor_nodes(Node{});
  CHECK(s == std::vector<Node>{Node{0, 1}, Node{2}});
  CHECK(t.successor_nodes(Node{2}) == std::vector<Node>{Node{2, 0, 0}});
}

TEST_CASE("depth examples") {
  CHECK(depth(WfTree::singleton(Node{})) == 0);
  CHECK(depth(fan(4)) == 1);
  CHECK(depth(WfTree::uniform(Node{}, 4, 2)) == 2);
}

TEST_CASE("restrict examples") {
  auto t = WfTree::uniform(Node{}, 4, 2);
  CHECK(restrict(t, Node{}) == t);
  CHECK(restrict(t, Node{2}) == WfTree::uniform(Node{2}, 4, 1));
  CHECK(restrict(t, Node{2, 3}) == WfTree::singleton(Node{2, 3}));
  CHECK_THROWS_AS(restrict(t, Node{5}), Error);
}

TEST_CASE("below_front examples") {
  auto t = WfTree::uniform(Node{}, 4, 2);
  auto leaves = t.maximal();
  CHECK(below_front(t, leaves) == t);
  std::vector<Node> root{Node{}};
  CHECK(below_front(t, root) == WfTree::singleton(Node{}));
  std::vector<Node> level1{Node{0}, Node{1}, Node{2}, Node{3}};
  CHECK(below_front(t, level1) == fan(4));
  std::vector<Node> missing{Node{9}};
  CHECK_THROWS_AS(below_front(t, missing), Error);
}

TEST_CASE("tree structure agrees with brute force on the small family") {
  auto p = params();
  auto family = enumerate_valid_trees(p.width, 2, 4, 1 << 12);
  CHECK(family.size() == 17);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) family.push_back(brute::random_tree(rng, 1, 4, 5, 3, 0.3));
  for (const auto& t : family) {
    auto s = brute::nodes(t);
    CHECK(depth(t) == brute::depth(s));
    CHECK(branches(t).size() == brute::branches(s).size());
    for (const auto& v : t.nodes()) {
      CHECK(t.successor_nodes(v) == brute::children(s, v));
      auto r = restrict(t, v);
      if (v != t.root()) CHECK(depth(r) < depth(t));
      // successors inside the restriction are the original successors
      for (const auto& u : r.nodes()) CHECK(r.successor_nodes(u) == t.successor_nodes(u));
    }
    if (t.size() > 22) continue;
    for (const auto& y : brute::fronts(s)) {
      auto h = below_front(t, y);
      auto mx = h.maximal();
      CHECK(brute::NodeSet(mx.begin(), mx.end()) == brute::NodeSet(y.begin(), y.end()));
    }
  }
}
