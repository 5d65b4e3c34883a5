#include <doctest.h>

#include <random>

#include "wft/game.hpp"
#include "wft/partition.hpp"
#include "wft/subtree.hpp"

using namespace wft;

namespace {

using BdNu = NuStrategy<QName<Value>, std::set<Value>>;
using BdBnd = BndStrategy<QName<Value>, std::set<Value>>;
using FbNu = NuStrategy<FbMove, Value>;
using FbBnd = BndStrategy<FbMove, Value>;

// Two worlds below a common condition c0 (index 2).
FinitePoset two_worlds() { return FinitePoset::from_world_sets(2, {{0, 1}}); }
FinitePoset one_world() { return FinitePoset::from_world_sets(1, {}); }

QName<Value> name_of(std::vector<Value> per_world) {
  QName<Value> q;
  for (std::size_t i = 0; i < per_world.size(); ++i) q.by_world[i] = per_world[i];
  return q;
}

// Some condition above p at which every round's answer holds in every world above it.
template <class Holds>
bool brute_bnd_wins(const FinitePoset& poset, Cond p, std::size_t rounds, Holds&& holds) {
  for (Cond q = 0; q < poset.size(); ++q) {
    if (!poset.leq(p, q)) continue;
    bool all = true;
    for (Cond w = 0; w < poset.size() && all; ++w) {
      if (!poset.is_world(w) || !poset.leq(q, w)) continue;
      for (std::size_t n = 0; n < rounds && all; ++n) all = holds(w, n);
    }
    if (all) return true;
  }
  return false;
}

// NU's sb move: the full binary value tree with a selector appending one value.
SbMove binary_move(std::vector<Value> per_world) {
  SbMove m;
  m.successors = [](const Seq&) { return std::vector<Value>{0, 1}; };
  m.selector = [per_world](Cond w, const Seq&) { return per_world.at(w); };
  return m;
}

FbMove fixed_fb(std::set<Value> index, std::vector<std::set<Value>> base, std::vector<std::set<Value>> xs) {
  FbMove m;
  m.index_set = std::move(index);
  m.base = std::move(base);
  for (std::size_t w = 0; w < xs.size(); ++w) m.x.by_world[w] = xs[w];
  return m;
}

}  // namespace

TEST_CASE("poset basics") {
  auto q = two_worlds();
  CHECK(q.size() == 3);
  CHECK(q.worlds() == std::vector<Cond>{0, 1});
  CHECK(q.leq(2, 0));
  CHECK(q.leq(2, 1));
  CHECK_FALSE(q.leq(0, 1));
  CHECK(q.worlds_above(2) == std::vector<Cond>{0, 1});
  CHECK_THROWS_AS(FinitePoset({"a", "b"}, {{"a", "b"}, {"b", "a"}}), Error);
  CHECK_THROWS_AS(FinitePoset({"a"}, {{"a", "z"}}), MalformedInput);
  CHECK_THROWS_AS(q.index("nope"), Error);
}

TEST_CASE("decide examples") {
  auto single = one_world();
  CHECK(decide(single, 0, name_of({4})) == std::optional<Value>(4));
  auto q = two_worlds();
  auto tau = name_of({0, 1});
  CHECK_FALSE(decide(q, 2, tau).has_value());
  CHECK(decide(q, 1, tau) == std::optional<Value>(1));
  CHECK(possible_values(q, 2, tau) == std::set<Value>{0, 1});
  QName<Value> partial;
  partial.by_world[0] = 3;
  CHECK_THROWS_AS(decide(q, 2, partial), Error);
}

TEST_CASE("bd game examples") {
  auto single = one_world();
  BdNu nu = [](const BdTranscript& tr, std::uint64_t) { return name_of({static_cast<Value>(tr.rounds.size())}); };
  BdBnd exact = [&](const BdTranscript&, const QName<Value>& tau, std::uint64_t) {
    return std::set<Value>{*decide(single, 0, tau)};
  };
  auto one = play_bd(single, 0, nu, exact, 5, 0, [](std::size_t) { return std::size_t{1}; });
  CHECK(one.bnd_wins);

  BdBnd empty = [](const BdTranscript&, const QName<Value>&, std::uint64_t) { return std::set<Value>{}; };
  CHECK_FALSE(play_bd(single, 0, nu, empty, 3).bnd_wins);

  auto q = two_worlds();
  std::mt19937_64 rng(3);
  BdNu split = [&](const BdTranscript&, std::uint64_t) { return name_of({Value(rng() % 5), Value(rng() % 5)}); };
  BdBnd both = [&](const BdTranscript&, const QName<Value>& tau, std::uint64_t) {
    return possible_values(q, 2, tau);
  };
  auto t = play_bd(q, 2, split, both, 6, 0, [](std::size_t) { return std::size_t{2}; });
  CHECK(t.bnd_wins);

  BdBnd first = [&](const BdTranscript&, const QName<Value>& tau, std::uint64_t) {
    return std::set<Value>{tau.at(0)};
  };
  CHECK_THROWS_AS(play_bd(q, 2, split, both, 3, 0, [](std::size_t) { return std::size_t{1}; }), Error);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = play_bd(q, 2, split, first, 4);
    bool expect = brute_bnd_wins(q, 2, 4, [&](Cond w, std::size_t n) {
      return r.rounds[n].second.count(r.rounds[n].first.at(w)) != 0;
    });
    CHECK(r.bnd_wins == expect);
  }
}

TEST_CASE("sb game examples") {
  auto single = one_world();
  using SbNu = NuStrategy<SbMove, Seq>;
  using SbBnd = BndStrategy<SbMove, Seq>;
  SbNu nu = [](const SbTranscript& tr, std::uint64_t) { return binary_move({Value(tr.rounds.size() % 2)}); };
  SbBnd pick = [](const SbTranscript&, const SbMove& m, std::uint64_t) { return Seq{m.selector(0, {})}; };
  CHECK(play_sb(single, 0, nu, pick, 4).bnd_wins);

  SbBnd extend = [](const SbTranscript&, const SbMove& m, std::uint64_t) {
    return Seq{m.selector(0, {}), 1, 0};
  };
  CHECK(play_sb(single, 0, nu, extend, 4).bnd_wins);

  SbBnd root = [](const SbTranscript&, const SbMove&, std::uint64_t) { return Seq{}; };
  auto r = play_sb(single, 0, nu, root, 3);
  CHECK_FALSE(r.bnd_wins);
  CHECK(r.flagged.size() == 3);

  SbNu bad = [](const SbTranscript&, std::uint64_t) { return binary_move({7}); };
  CHECK_THROWS_WITH_AS(play_sb(single, 0, bad, pick, 1), doctest::Contains("IllFormedMove"), Error);
}

TEST_CASE("filter games") {
  auto q = two_worlds();
  FbNu contains_base = [](const FbTranscript&, std::uint64_t) {
    return fixed_fb({0, 1, 2, 3}, {{1, 2, 3}, {2, 3}}, {{2, 3, 0}, {2, 3}});
  };
  FbBnd in_all = [](const FbTranscript&, const FbMove&, std::uint64_t) { return Value{2}; };
  CHECK(play_vfbd(q, 2, contains_base, in_all, 3).bnd_wins);

  FbBnd miss = [](const FbTranscript&, const FbMove&, std::uint64_t) { return Value{1}; };
  CHECK_FALSE(play_vfbd(q, 2, contains_base, miss, 3).bnd_wins);

  auto single = one_world();
  FbNu lone = [](const FbTranscript&, std::uint64_t) { return fixed_fb({0, 1, 2}, {{0, 1, 2}}, {{0, 1, 2}}); };
  FbBnd any = [](const FbTranscript& tr, const FbMove&, std::uint64_t) { return Value(tr.rounds.size() % 3); };
  CHECK(play_vfbd(single, 0, lone, any, 3).bnd_wins);

  FbNu empty_base = [](const FbTranscript&, std::uint64_t) { return fixed_fb({0, 1}, {{0}, {1}}, {{0}}); };
  CHECK_THROWS_WITH_AS(play_vfbd(single, 0, empty_base, any, 1), doctest::Contains("EmptyFilterBase"), Error);

  FbNu ext = [](const FbTranscript&, std::uint64_t) {
    auto m = fixed_fb({0, 1, 2}, {{0, 1, 2}}, {{1, 2}});
    QName<std::vector<std::set<Value>>> e;
    e.by_world[0] = {{0, 1, 2}, {1, 2}};
    m.extension = e;
    return m;
  };
  FbBnd one = [](const FbTranscript&, const FbMove&, std::uint64_t) { return Value{1}; };
  CHECK(play_ufbd(single, 0, ext, one, 2).bnd_wins);
}

TEST_CASE("bd to sb translation") {
  auto q = two_worlds();
  auto tau = name_of({7, 3});
  std::set<Value> u{3, 7};
  auto m = translate_bd_to_sb(u, tau);
  CHECK(m.selector(0, Seq{3}) == 7);
  CHECK(m.successors(Seq{}) == std::vector<Value>{3, 7});
  CHECK_FALSE(check_range_equivalence(q, u, tau, 2).has_value());
  CHECK_FALSE(check_range_equivalence(q, u, tau, 3).has_value());

  auto single = one_world();
  auto five = translate_bd_to_sb({5}, name_of({5}));
  CHECK(sb_round_holds(five, 0, Seq{5}));
  CHECK_THROWS_AS(translate_bd_to_sb({}, tau), Error);

  CHECK(bd_answer_to_sb({1, 4}) == Seq{1, 1, 4, 4});
  CHECK(sb_answer_to_bd(Seq{1, 1, 4, 4}) == std::set<Value>{1, 4});
}

TEST_CASE("transported strategy wins the bd game") {
  auto q = two_worlds();
  BndStrategy<SbMove, Seq> sb = [&](const SbTranscript&, const SbMove& m, std::uint64_t) {
    Seq eta;
    for (auto w : q.worlds_above(2)) {
      auto v = m.selector(w, eta);
      eta.push_back(v);
      eta.push_back(v);
    }
    return eta;
  };
  auto bnd = transport_sb_strategy(q, 2, sb);
  std::mt19937_64 rng(17);
  BdNu nu = [&](const BdTranscript&, std::uint64_t) { return name_of({Value(rng() % 4), Value(rng() % 4)}); };
  CHECK(play_bd(q, 2, nu, bnd, 5).bnd_wins);
}

TEST_CASE("bd and vfbd translations") {
  auto q = two_worlds();
  auto tau = name_of({0, 1});
  auto tr = translate_bd_to_vfbd(q, tau, {0, 1}, 2);
  // labels {0}, {1}, {0,1}
  CHECK(tr.labels.size() == 3);
  auto t = tr.encode({0, 1});
  CHECK(bd_to_vfbd_guarantee(q, tau, tr, 2, t));
  for (Cond w : q.worlds()) CHECK(tr.move.x.at(w).count(t));
  CHECK_THROWS_AS(translate_bd_to_vfbd(q, tau, {0, 1}, 0), Error);

  auto single = one_world();
  auto id = translate_bd_to_vfbd(single, name_of({4}), {4}, 1);
  CHECK(id.labels == std::vector<std::set<Value>>{{4}});
  CHECK(id.decode(0) == std::set<Value>{4});

  auto y = fixed_fb({0, 1, 2}, {{1, 2}}, {{1, 2}, {1, 2, 0}});
  auto back = translate_vfbd_to_bd(q, y);
  CHECK(back.answer({0}).has_value());
  CHECK(vfbd_to_bd_guarantee(q, y, back, 2, {0}));
}

TEST_CASE("big family examples") {
  std::vector<std::set<std::size_t>> halves;
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    if (std::popcount(mask) != 3) continue;
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < 6; ++i) {
      if (mask >> i & 1u) s.insert(i);
    }
    halves.push_back(s);
  }
  auto r = check_big_family(halves, 6);
  CHECK(r.big);
  CHECK(r.exhaustive);
  CHECK(r.checked == 64);

  auto lone = check_big_family({{0, 1}}, 2);
  CHECK_FALSE(lone.big);
  CHECK_FALSE(lone.counterexamples.empty());

  std::vector<std::set<std::size_t>> singles;
  for (std::size_t i = 0; i < 5; ++i) singles.push_back({i});
  CHECK(check_big_family(singles, 5).big);
}

TEST_CASE("fg bounding witness examples") {
  auto single = one_world();
  QName<Seq> eta;
  eta.by_world[0] = {2, 0, 1};
  std::vector<Value> f{4, 4, 4};
  std::vector<Value> g{1, 1, 1};
  CHECK(check_fg_bounding_witness(single, eta, {{2}, {0}, {1}}, f, g));
  CHECK_FALSE(check_fg_bounding_witness(single, eta, {{2}, {3}, {1}}, f, g));

  auto q = two_worlds();
  QName<Seq> two;
  two.by_world[0] = {1, 1};
  two.by_world[1] = {2, 3};
  CHECK(check_fg_bounding_witness(q, two, {{1, 2}, {1, 3}}, {4, 4}, {2, 2}));
  CHECK_FALSE(check_fg_bounding_witness(q, two, {{1, 2}, {1, 3}}, {4, 4}, {1, 1}));
  CHECK_THROWS_AS(check_fg_bounding_witness(q, two, {{1, 2}}, {4, 4}, {2, 2}), Error);
}

TEST_CASE("psb_inside and shattering") {
  SurrogateParams p;
  auto b = WfTree::uniform(Node{}, 4, 2);
  auto leaves = b.maximal();
  std::set<Node> even;
  for (const auto& n : leaves) {
    if (n[1] % 2 == 0) even.insert(n);
  }
  auto in = psb_inside(b, even, p.keep_min);
  REQUIRE(in.has_value());
  CHECK(in->maximal().size() == 8);
  std::set<Node> one_cone(leaves.begin(), leaves.begin() + 4);
  CHECK_FALSE(psb_inside(b, one_cone, p.keep_min).has_value());

  auto single = one_world();
  QName<std::set<Node>> constant;
  constant.by_world[0] = even;
  CHECK(is_nontree_shattering(single, b, {constant}, p).ok);

  auto q = two_worlds();
  QName<std::set<Node>> same;
  same.by_world[0] = even;
  same.by_world[1] = even;
  CHECK(is_nontree_shattering(q, b, {same}, p).ok);
}

TEST_CASE("homogenize examples") {
  SurrogateParams p;
  auto b = WfTree::uniform(Node{}, 4, 2);
  auto leaves = b.maximal();
  std::set<Node> all(leaves.begin(), leaves.end());
  auto q = two_worlds();

  QName<std::set<Node>> full;
  full.by_world[0] = all;
  full.by_world[1] = all;
  auto h = homogenize(q, 2, b, full, p);
  CHECK(h.t);
  CHECK(h.subtree == b);

  QName<std::set<Node>> none;
  none.by_world[0] = {};
  none.by_world[1] = {};
  auto n = homogenize(q, 2, b, none, p);
  CHECK_FALSE(n.t);
  CHECK(n.subtree == b);

  QName<std::set<Node>> differ;
  differ.by_world[0] = all;
  auto minus = all;
  for (std::uint32_t j = 0; j < 4; ++j) minus.erase(Node{0, j});
  differ.by_world[1] = minus;
  auto d = homogenize(q, 2, b, differ, p);
  CHECK(q.leq(2, d.q));
  CHECK(check_psb(d.subtree, b, p));
  CHECK(homogeneous(q, d.q, d.subtree, differ, d.t));
  for (auto w : q.worlds_above(d.q)) {
    for (const auto& leaf : d.subtree.maximal()) CHECK((differ.at(w).count(leaf) != 0) == d.t);
  }
}
