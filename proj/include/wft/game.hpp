#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wft/error.hpp"
#include "wft/tree.hpp"

namespace wft {

using Cond = std::size_t;
using Value = std::int64_t;
using Seq = std::vector<Value>;

/// A finite poset of conditions; q <= r means r is stronger. Worlds are the
/// maximal conditions, and q forces a statement when it holds in every world above q.
class FinitePoset {
 public:
  /// Takes the reflexive-transitive closure of `le`. Throws MalformedInput on
  /// unknown names and Error("NotPartialOrder") on a cycle.
  FinitePoset(std::vector<std::string> conds, const std::vector<std::pair<std::string, std::string>>& le);

  /// Conditions given by the worlds above them; conds[i] lists world indices
  /// in [0, worlds). Worlds come first and are named w0, w1, ...
  static FinitePoset from_world_sets(std::size_t worlds, const std::vector<std::set<std::size_t>>& conds);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(Cond c) const { return names_.at(c); }
  /// Throws Error("UnknownCondition").
  Cond index(const std::string& name) const;
  bool leq(Cond a, Cond b) const { return le_[a][b] != 0; }
  const std::vector<Cond>& worlds() const noexcept { return worlds_; }
  bool is_world(Cond c) const;
  std::vector<Cond> worlds_above(Cond q) const;
  /// Conditions >= q, q first and the rest by index.
  std::vector<Cond> above(Cond q) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<char>> le_;
  std::vector<Cond> worlds_;
};

/// A name: one value per world.
template <class V>
struct QName {
  std::map<Cond, V> by_world;

  const V& at(Cond world) const {
    auto it = by_world.find(world);
    if (it == by_world.end()) throw Error("NotTotal", "name has no value at world " + std::to_string(world));
    return it->second;
  }
};

template <class V>
void check_total(const FinitePoset& q, const QName<V>& name) {
  for (auto w : q.worlds()) name.at(w);
}

template <class Pred>
bool forces(const FinitePoset& poset, Cond q, Pred&& holds) {
  for (auto w : poset.worlds_above(q)) {
    if (!holds(w)) return false;
  }
  return true;
}

/// The common value over the worlds above q, if there is one.
template <class V>
std::optional<V> decide(const FinitePoset& poset, Cond q, const QName<V>& name) {
  std::optional<V> v;
  for (auto w : poset.worlds_above(q)) {
    const V& x = name.at(w);
    if (v && !(*v == x)) return std::nullopt;
    v = x;
  }
  return v;
}

/// The values some world above p assigns.
std::set<Value> possible_values(const FinitePoset& poset, Cond p, const QName<Value>& tau);

// ---------------------------------------------------------------------------
// Plays

template <class NuMove, class BndMove>
struct Transcript {
  std::vector<std::pair<NuMove, BndMove>> rounds;
  bool bnd_wins = false;
  /// The condition found above p witnessing a BND win.
  std::optional<Cond> witness;
  /// Rounds where BND picked the root of an sb tree, which cannot win.
  std::vector<std::size_t> flagged;
};

template <class NuMove, class BndMove>
using NuStrategy = std::function<NuMove(const Transcript<NuMove, BndMove>&, std::uint64_t seed)>;
template <class NuMove, class BndMove>
using BndStrategy = std::function<BndMove(const Transcript<NuMove, BndMove>&, const NuMove&, std::uint64_t seed)>;

/// NU's sb move: a tree of value sequences given by its successor sets, and a
/// selector name picking a successor of each node in each world.
struct SbMove {
  std::function<std::vector<Value>(const Seq&)> successors;
  std::function<Value(Cond world, const Seq&)> selector;
};

using SbTranscript = Transcript<SbMove, Seq>;
using BdTranscript = Transcript<QName<Value>, std::set<Value>>;

/// The sb round condition in one world: some even k < |eta| has
/// eta[k] = selector(world, eta restricted to k).
bool sb_round_holds(const SbMove& m, Cond world, const Seq& eta);

/// NU moves are probed along BND's pick and its leftmost continuation down to
/// `probe_depth` (default rounds + 2). Throws Error("IllFormedMove").
SbTranscript play_sb(const FinitePoset& poset, Cond p, const NuStrategy<SbMove, Seq>& nu,
                     const BndStrategy<SbMove, Seq>& bnd, std::size_t rounds, std::uint64_t seed = 0,
                     std::optional<std::size_t> probe_depth = std::nullopt);

/// With `cap`, |w_n| <= cap(n) is enforced (Error("CapViolated")).
BdTranscript play_bd(const FinitePoset& poset, Cond p, const NuStrategy<QName<Value>, std::set<Value>>& nu,
                     const BndStrategy<QName<Value>, std::set<Value>>& bnd, std::size_t rounds,
                     std::uint64_t seed = 0, std::optional<std::function<std::size_t(std::size_t)>> cap = std::nullopt);

/// NU's filter move on a finite index set: a filter base, the name X, and in
/// the ufbd game a name of an extending base per world.
struct FbMove {
  std::set<Value> index_set;
  std::vector<std::set<Value>> base;
  QName<std::set<Value>> x;
  std::optional<QName<std::vector<std::set<Value>>>> extension;
};

using FbTranscript = Transcript<FbMove, Value>;

/// vfbd: in every world above p, X includes a base member.
/// Throws Error("EmptyFilterBase") and Error("IllFormedMove").
FbTranscript play_vfbd(const FinitePoset& poset, Cond p, const NuStrategy<FbMove, Value>& nu,
                       const BndStrategy<FbMove, Value>& bnd, std::size_t rounds, std::uint64_t seed = 0);
/// ufbd: the extension contains the base and X includes one of its members.
FbTranscript play_ufbd(const FinitePoset& poset, Cond p, const NuStrategy<FbMove, Value>& nu,
                       const BndStrategy<FbMove, Value>& bnd, std::size_t rounds, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Translations

/// The sequence tree over u with the appending selector eta -> eta^<tau>.
/// Throws Error("EmptyValueSet").
SbMove translate_bd_to_sb(const std::set<Value>& u, const QName<Value>& tau);

/// Checks, for every condition q and every sequence over u of length <= depth,
/// that q forces tau into the range of eta iff q forces some prefix nu of eta
/// with nu^<F(nu)> an initial segment of eta. Returns the first failure.
std::optional<std::pair<Cond, Seq>> check_range_equivalence(const FinitePoset& poset, const std::set<Value>& u,
                                                             const QName<Value>& tau, std::size_t depth);

/// BND answers moved between the two games. A bd answer w becomes the sequence
/// listing w with every value doubled, so each value sits at an even level.
Seq bd_answer_to_sb(const std::set<Value>& w);
std::set<Value> sb_answer_to_bd(const Seq& eta);

/// Turns a BND strategy for the sb game into one for the bd game by playing
/// the translated trees and answering with the range of the sb pick.
BndStrategy<QName<Value>, std::set<Value>> transport_sb_strategy(const FinitePoset& poset, Cond p,
                                                                const BndStrategy<SbMove, Seq>& sb);

/// bd move tau over I1 to the filter move on the nonempty subsets of I1 of
/// size <= c, indexed 0, 1, ... by (size, lexicographic) order.
struct VfbdTranslation {
  FbMove move;
  std::vector<std::set<Value>> labels;

  /// Index of w. Throws Error("CapTooSmall") when w is not a label.
  Value encode(const std::set<Value>& w) const;
  const std::set<Value>& decode(Value t) const { return labels.at(static_cast<std::size_t>(t)); }
};

/// Base: for each label u*, the labels containing u*. X(world) = labels holding tau.
/// Throws Error("CapTooSmall") when c = 0 or c < |I1|, since then the base has
/// empty intersection.
VfbdTranslation translate_bd_to_vfbd(const FinitePoset& poset, const QName<Value>& tau, const std::set<Value>& i1,
                                     std::size_t c);

/// vfbd move to a bd name: in each world, the index of the first base member X includes.
struct BdTranslation {
  QName<Value> tau;
  std::vector<std::set<Value>> base;

  /// A point of the intersection of the chosen base members, if any.
  std::optional<Value> answer(const std::set<Value>& members) const;
};

/// Throws Error("IllFormedMove") when X includes no base member in some world.
BdTranslation translate_vfbd_to_bd(const FinitePoset& poset, const FbMove& y);

/// q forces t into X implies q forces tau into decode(t).
bool bd_to_vfbd_guarantee(const FinitePoset& poset, const QName<Value>& tau, const VfbdTranslation& tr, Cond q,
                          Value t);
/// q forces tau' into the chosen members implies q forces every point of their intersection into X.
bool vfbd_to_bd_guarantee(const FinitePoset& poset, const FbMove& y, const BdTranslation& tr, Cond q,
                          const std::set<Value>& members);

// ---------------------------------------------------------------------------
// Ground checks

struct ShatteringReport {
  bool ok = true;
  /// (p, name index) pairs with no monochromatic positive subtree forced above p.
  std::vector<std::pair<Cond, std::size_t>> failures;
};

/// Each name assigns a subset of max(b) (Error("NotSubset")).
ShatteringReport is_nontree_shattering(const FinitePoset& poset, const WfTree& b,
                                       const std::vector<QName<std::set<Node>>>& names, const SurrogateParams& p);

/// The largest positive subtree of b with every maximal node in `inside`, if any.
std::optional<WfTree> psb_inside(const WfTree& b, const std::set<Node>& inside, std::uint32_t keep_min);

struct BigFamilyReport {
  bool big = true;
  bool exhaustive = true;
  std::size_t checked = 0;
  /// 2-colorings of the universe (bit i = color of i) with no monochromatic member.
  std::vector<std::uint64_t> counterexamples;
};

/// Sets over {0, ..., universe-1}, universe <= 64. Exhaustive when
/// 2^universe <= exhaustive_bound, otherwise `trials` seeded samples.
BigFamilyReport check_big_family(const std::vector<std::set<std::size_t>>& family, std::size_t universe,
                                 std::size_t trials = 4096, std::uint64_t seed = 0,
                                 std::size_t exhaustive_bound = 1u << 20, std::size_t max_counterexamples = 8);

/// |w_n| <= g(n), w_n ⊆ [0, f(n)), and every world's eta(n) lies in w_n.
/// Throws Error("ShapeMismatch") on unequal lengths, short sequences, or g > f.
bool check_fg_bounding_witness(const FinitePoset& poset, const QName<Seq>& eta, const std::vector<std::set<Value>>& w,
                               const std::vector<Value>& f, const std::vector<Value>& g);

// ---------------------------------------------------------------------------
// Homogenization

struct Homogenized {
  Cond q = 0;
  WfTree subtree = WfTree::singleton(Node{});
  bool t = true;
  /// Simulated sb rounds, one per root successor, at the top level.
  std::size_t rounds = 0;
};

/// max(sub) lies inside A in every world above q when t, outside it otherwise.
bool homogeneous(const FinitePoset& poset, Cond q, const WfTree& sub, const QName<std::set<Node>>& a, bool t);

/// Finds q >= p, a positive subtree and a truth value with max(subtree) inside
/// A^[t] in every world above q, by recursion on depth with a simulated sb play
/// at each internal level. Throws Error("NotSubset"), Error("BignessUnavailable"),
/// and Error("SizeLimitExceeded") from the positive-subtree enumeration.
Homogenized homogenize(const FinitePoset& poset, Cond p, const WfTree& b, const QName<std::set<Node>>& a,
                       const SurrogateParams& params);

}  // namespace wft
