#include "wft/game.hpp"

#include <algorithm>
#include <memory>
#include <random>

#include "wft/subtree.hpp"

namespace wft {

FinitePoset::FinitePoset(std::vector<std::string> conds, const std::vector<std::pair<std::string, std::string>>& le)
    : names_(std::move(conds)) {
  const std::size_t n = names_.size();
  if (n == 0) throw MalformedInput("poset has no conditions");
  std::map<std::string, Cond> idx;
  for (Cond i = 0; i < n; ++i) {
    if (!idx.emplace(names_[i], i).second) throw MalformedInput("duplicate condition " + names_[i]);
  }
  le_.assign(n, std::vector<char>(n, 0));
  for (Cond i = 0; i < n; ++i) le_[i][i] = 1;
  for (const auto& [a, b] : le) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end() || ib == idx.end()) throw MalformedInput("order pair names an unknown condition");
    le_[ia->second][ib->second] = 1;
  }
  for (Cond k = 0; k < n; ++k) {
    for (Cond i = 0; i < n; ++i) {
      if (!le_[i][k]) continue;
      for (Cond j = 0; j < n; ++j) {
        if (le_[k][j]) le_[i][j] = 1;
      }
    }
  }
  for (Cond i = 0; i < n; ++i) {
    for (Cond j = i + 1; j < n; ++j) {
      if (le_[i][j] && le_[j][i]) throw Error("NotPartialOrder", names_[i] + " and " + names_[j] + " form a cycle");
    }
  }
  for (Cond i = 0; i < n; ++i) {
    bool maximal = true;
    for (Cond j = 0; j < n && maximal; ++j) {
      if (j != i && le_[i][j]) maximal = false;
    }
    if (maximal) worlds_.push_back(i);
  }
}

FinitePoset FinitePoset::from_world_sets(std::size_t worlds, const std::vector<std::set<std::size_t>>& conds) {
  std::vector<std::string> names;
  for (std::size_t w = 0; w < worlds; ++w) names.push_back("w" + std::to_string(w));
  std::vector<std::pair<std::string, std::string>> le;
  for (std::size_t i = 0; i < conds.size(); ++i) {
    if (conds[i].size() < 2) throw MalformedInput("a non-world condition needs at least two worlds above it");
    names.push_back("c" + std::to_string(i));
    for (auto w : conds[i]) {
      if (w >= worlds) throw MalformedInput("world index out of range");
      le.emplace_back(names.back(), "w" + std::to_string(w));
    }
  }
  for (std::size_t i = 0; i < conds.size(); ++i) {
    for (std::size_t j = 0; j < conds.size(); ++j) {
      if (i != j && std::includes(conds[i].begin(), conds[i].end(), conds[j].begin(), conds[j].end())) {
        le.emplace_back("c" + std::to_string(i), "c" + std::to_string(j));
      }
    }
  }
  return FinitePoset(std::move(names), le);
}

Cond FinitePoset::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("UnknownCondition", name);
  return static_cast<Cond>(it - names_.begin());
}

bool FinitePoset::is_world(Cond c) const { return std::binary_search(worlds_.begin(), worlds_.end(), c); }

std::vector<Cond> FinitePoset::worlds_above(Cond q) const {
  std::vector<Cond> out;
  for (auto w : worlds_) {
    if (le_.at(q)[w]) out.push_back(w);
  }
  return out;
}

std::vector<Cond> FinitePoset::above(Cond q) const {
  std::vector<Cond> out{q};
  for (Cond c = 0; c < size(); ++c) {
    if (c != q && le_.at(q)[c]) out.push_back(c);
  }
  return out;
}

std::set<Value> possible_values(const FinitePoset& poset, Cond p, const QName<Value>& tau) {
  std::set<Value> u;
  for (auto w : poset.worlds_above(p)) u.insert(tau.at(w));
  return u;
}

// ---------------------------------------------------------------------------

namespace {

template <class NuMove, class BndMove, class RoundHolds>
void settle(const FinitePoset& poset, Cond p, Transcript<NuMove, BndMove>& tr, RoundHolds&& holds) {
  for (auto q : poset.above(p)) {
    bool ok = forces(poset, q, [&](Cond w) {
      return std::all_of(tr.rounds.begin(), tr.rounds.end(), [&](const auto& r) { return holds(w, r.first, r.second); });
    });
    if (ok) {
      tr.bnd_wins = true;
      tr.witness = q;
      return;
    }
  }
}

bool contains(const std::vector<Value>& v, Value x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

bool sb_round_holds(const SbMove& m, Cond world, const Seq& eta) {
  for (std::size_t k = 0; k < eta.size(); k += 2) {
    Seq prefix(eta.begin(), eta.begin() + static_cast<std::ptrdiff_t>(k));
    if (m.selector(world, prefix) == eta[k]) return true;
  }
  return false;
}

SbTranscript play_sb(const FinitePoset& poset, Cond p, const NuStrategy<SbMove, Seq>& nu,
                     const BndStrategy<SbMove, Seq>& bnd, std::size_t rounds, std::uint64_t seed,
                     std::optional<std::size_t> probe_depth) {
  SbTranscript tr;
  const auto ws = poset.worlds_above(p);
  const std::size_t depth = probe_depth.value_or(rounds + 2);
  for (std::size_t n = 0; n < rounds; ++n) {
    SbMove m = nu(tr, seed);
    Seq eta = bnd(tr, m, seed);
    Seq cur;
    for (std::size_t k = 0; k <= std::max(depth, eta.size()); ++k) {
      auto succ = m.successors(cur);
      if (succ.empty()) {
        throw Error("IllFormedMove", "b(alpha): tree has a maximal node at level " + std::to_string(k));
      }
      for (auto w : ws) {
        if (!contains(succ, m.selector(w, cur))) {
          throw Error("IllFormedMove", "b(alpha): selector leaves the successor set at level " + std::to_string(k));
        }
      }
      if (k < eta.size()) {
        if (!contains(succ, eta[k])) throw Error("IllFormedMove", "b(beta): pick is not a node of the tree");
        cur.push_back(eta[k]);
      } else {
        cur.push_back(succ.front());
      }
    }
    if (eta.empty()) tr.flagged.push_back(n);
    tr.rounds.emplace_back(std::move(m), std::move(eta));
  }
  settle(poset, p, tr, [](Cond w, const SbMove& m, const Seq& eta) { return sb_round_holds(m, w, eta); });
  return tr;
}

BdTranscript play_bd(const FinitePoset& poset, Cond p, const NuStrategy<QName<Value>, std::set<Value>>& nu,
                     const BndStrategy<QName<Value>, std::set<Value>>& bnd, std::size_t rounds, std::uint64_t seed,
                     std::optional<std::function<std::size_t(std::size_t)>> cap) {
  BdTranscript tr;
  for (std::size_t n = 0; n < rounds; ++n) {
    auto tau = nu(tr, seed);
    check_total(poset, tau);
    auto w = bnd(tr, tau, seed);
    if (cap && w.size() > (*cap)(n)) {
      throw Error("CapViolated", "round " + std::to_string(n) + ": |w| = " + std::to_string(w.size()));
    }
    tr.rounds.emplace_back(std::move(tau), std::move(w));
  }
  settle(poset, p, tr,
         [](Cond w, const QName<Value>& tau, const std::set<Value>& ws) { return ws.count(tau.at(w)) != 0; });
  return tr;
}

namespace {

bool includes_set(const std::set<Value>& big, const std::set<Value>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::set<Value> intersection(const std::vector<std::set<Value>>& sets) {
  if (sets.empty()) return {};
  std::set<Value> acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    std::set<Value> next;
    std::set_intersection(acc.begin(), acc.end(), sets[i].begin(), sets[i].end(), std::inserter(next, next.end()));
    acc = std::move(next);
  }
  return acc;
}

void check_base(const FbMove& m, const std::vector<std::set<Value>>& base) {
  if (base.empty() || intersection(base).empty()) throw Error("EmptyFilterBase", "filter base has empty intersection");
  for (const auto& b : base) {
    if (!includes_set(m.index_set, b)) throw Error("IllFormedMove", "base member outside the index set");
  }
}

bool includes_member(const std::set<Value>& x, const std::vector<std::set<Value>>& base) {
  return std::any_of(base.begin(), base.end(), [&](const std::set<Value>& b) { return includes_set(x, b); });
}

FbTranscript play_fb(bool ultra, const FinitePoset& poset, Cond p, const NuStrategy<FbMove, Value>& nu,
                     const BndStrategy<FbMove, Value>& bnd, std::size_t rounds, std::uint64_t seed) {
  FbTranscript tr;
  const auto ws = poset.worlds_above(p);
  for (std::size_t n = 0; n < rounds; ++n) {
    FbMove m = nu(tr, seed);
    check_base(m, m.base);
    check_total(poset, m.x);
    for (auto w : ws) {
      if (!ultra) {
        if (!includes_member(m.x.at(w), m.base)) throw Error("IllFormedMove", "b(alpha): X includes no base member");
        continue;
      }
      if (!m.extension) throw Error("IllFormedMove", "b(alpha): missing extension name");
      const auto& ext = m.extension->at(w);
      for (const auto& b : m.base) {
        if (std::find(ext.begin(), ext.end(), b) == ext.end()) {
          throw Error("IllFormedMove", "b(alpha): extension drops a base member");
        }
      }
      check_base(m, ext);
      if (!includes_member(m.x.at(w), ext)) throw Error("IllFormedMove", "b(alpha): X includes no extension member");
    }
    Value t = bnd(tr, m, seed);
    if (!m.index_set.count(t)) throw Error("IllFormedMove", "b(beta): pick outside the index set");
    tr.rounds.emplace_back(std::move(m), t);
  }
  settle(poset, p, tr, [](Cond w, const FbMove& m, Value t) { return m.x.at(w).count(t) != 0; });
  return tr;
}

}  // namespace

FbTranscript play_vfbd(const FinitePoset& poset, Cond p, const NuStrategy<FbMove, Value>& nu,
                       const BndStrategy<FbMove, Value>& bnd, std::size_t rounds, std::uint64_t seed) {
  return play_fb(false, poset, p, nu, bnd, rounds, seed);
}

FbTranscript play_ufbd(const FinitePoset& poset, Cond p, const NuStrategy<FbMove, Value>& nu,
                       const BndStrategy<FbMove, Value>& bnd, std::size_t rounds, std::uint64_t seed) {
  return play_fb(true, poset, p, nu, bnd, rounds, seed);
}

// ---------------------------------------------------------------------------

SbMove translate_bd_to_sb(const std::set<Value>& u, const QName<Value>& tau) {
  if (u.empty()) throw Error("EmptyValueSet", "no world assigns a value");
  std::vector<Value> succ(u.begin(), u.end());
  SbMove m;
  m.successors = [succ](const Seq&) { return succ; };
  m.selector = [tau](Cond w, const Seq&) { return tau.at(w); };
  return m;
}

std::optional<std::pair<Cond, Seq>> check_range_equivalence(const FinitePoset& poset, const std::set<Value>& u,
                                                             const QName<Value>& tau, std::size_t depth) {
  const SbMove m = translate_bd_to_sb(u, tau);
  std::vector<Seq> seqs{{}};
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (seqs[i].size() == depth) continue;
    for (auto v : u) {
      Seq s = seqs[i];
      s.push_back(v);
      seqs.push_back(std::move(s));
    }
  }
  for (Cond q = 0; q < poset.size(); ++q) {
    for (const auto& eta : seqs) {
      bool in_range = forces(poset, q, [&](Cond w) { return contains(eta, tau.at(w)); });
      bool extends = forces(poset, q, [&](Cond w) {
        for (std::size_t k = 0; k < eta.size(); ++k) {
          Seq nu(eta.begin(), eta.begin() + static_cast<std::ptrdiff_t>(k));
          if (m.selector(w, nu) == eta[k]) return true;
        }
        return false;
      });
      if (in_range != extends) return std::make_pair(q, eta);
    }
  }
  return std::nullopt;
}

Seq bd_answer_to_sb(const std::set<Value>& w) {
  Seq eta;
  for (auto v : w) {
    eta.push_back(v);
    eta.push_back(v);
  }
  return eta;
}

std::set<Value> sb_answer_to_bd(const Seq& eta) { return {eta.begin(), eta.end()}; }

BndStrategy<QName<Value>, std::set<Value>> transport_sb_strategy(const FinitePoset& poset, Cond p,
                                                                const BndStrategy<SbMove, Seq>& sb) {
  return [&poset, p, sb](const BdTranscript& bd, const QName<Value>& tau, std::uint64_t seed) {
    SbTranscript shadow;
    for (const auto& r : bd.rounds) {
      auto m = translate_bd_to_sb(possible_values(poset, p, r.first), r.first);
      auto eta = sb(shadow, m, seed);
      shadow.rounds.emplace_back(std::move(m), std::move(eta));
    }
    auto m = translate_bd_to_sb(possible_values(poset, p, tau), tau);
    return sb_answer_to_bd(sb(shadow, m, seed));
  };
}

Value VfbdTranslation::encode(const std::set<Value>& w) const {
  auto it = std::find(labels.begin(), labels.end(), w);
  if (it == labels.end()) throw Error("CapTooSmall", "answer is not a label of the translated move");
  return static_cast<Value>(it - labels.begin());
}

VfbdTranslation translate_bd_to_vfbd(const FinitePoset& poset, const QName<Value>& tau, const std::set<Value>& i1,
                                     std::size_t c) {
  if (c == 0) throw Error("CapTooSmall", "c must be at least 1");
  if (c < i1.size()) throw Error("CapTooSmall", "c below |I1| leaves the base with empty intersection");
  if (i1.size() > 16) throw Error("SizeLimitExceeded", "|I1| above 16");
  for (auto w : poset.worlds()) {
    if (!i1.count(tau.at(w))) throw Error("NotSubset", "a world's value lies outside I1");
  }
  const std::vector<Value> elems(i1.begin(), i1.end());
  VfbdTranslation tr;
  for (std::uint32_t mask = 1; mask < (1u << elems.size()); ++mask) {
    std::set<Value> s;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (mask >> i & 1u) s.insert(elems[i]);
    }
    if (s.size() <= c) tr.labels.push_back(std::move(s));
  }
  std::sort(tr.labels.begin(), tr.labels.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  const auto n = static_cast<Value>(tr.labels.size());
  for (Value j = 0; j < n; ++j) tr.move.index_set.insert(j);
  for (const auto& star : tr.labels) {
    std::set<Value> member;
    for (Value j = 0; j < n; ++j) {
      if (includes_set(tr.labels[static_cast<std::size_t>(j)], star)) member.insert(j);
    }
    tr.move.base.push_back(std::move(member));
  }
  for (auto w : poset.worlds()) {
    std::set<Value> x;
    for (Value j = 0; j < n; ++j) {
      if (tr.labels[static_cast<std::size_t>(j)].count(tau.at(w))) x.insert(j);
    }
    tr.move.x.by_world[w] = std::move(x);
  }
  return tr;
}

std::optional<Value> BdTranslation::answer(const std::set<Value>& members) const {
  std::vector<std::set<Value>> chosen;
  for (auto j : members) {
    if (j < 0 || static_cast<std::size_t>(j) >= base.size()) throw Error("IllFormedMove", "unknown base member");
    chosen.push_back(base[static_cast<std::size_t>(j)]);
  }
  auto common = intersection(chosen);
  if (common.empty()) return std::nullopt;
  return *common.begin();
}

BdTranslation translate_vfbd_to_bd(const FinitePoset& poset, const FbMove& y) {
  check_base(y, y.base);
  BdTranslation tr;
  tr.base = y.base;
  for (auto w : poset.worlds()) {
    const auto& x = y.x.at(w);
    auto it = std::find_if(y.base.begin(), y.base.end(), [&](const std::set<Value>& b) { return includes_set(x, b); });
    if (it == y.base.end()) throw Error("IllFormedMove", "X includes no base member in world " + poset.name(w));
    tr.tau.by_world[w] = static_cast<Value>(it - y.base.begin());
  }
  return tr;
}

bool bd_to_vfbd_guarantee(const FinitePoset& poset, const QName<Value>& tau, const VfbdTranslation& tr, Cond q,
                          Value t) {
  if (!forces(poset, q, [&](Cond w) { return tr.move.x.at(w).count(t) != 0; })) return true;
  return forces(poset, q, [&](Cond w) { return tr.decode(t).count(tau.at(w)) != 0; });
}

bool vfbd_to_bd_guarantee(const FinitePoset& poset, const FbMove& y, const BdTranslation& tr, Cond q,
                          const std::set<Value>& members) {
  if (!forces(poset, q, [&](Cond w) { return members.count(tr.tau.at(w)) != 0; })) return true;
  std::vector<std::set<Value>> chosen;
  for (auto j : members) chosen.push_back(tr.base.at(static_cast<std::size_t>(j)));
  auto common = intersection(chosen);
  if (common.empty()) return false;
  return std::all_of(common.begin(), common.end(), [&](Value t) {
    return forces(poset, q, [&](Cond w) { return y.x.at(w).count(t) != 0; });
  });
}

// ---------------------------------------------------------------------------

std::optional<WfTree> psb_inside(const WfTree& b, const std::set<Node>& inside, std::uint32_t keep_min) {
  const std::size_t n = b.size();
  NodeMask good(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    auto idx = static_cast<NodeIndex>(i);
    if (!b.has_successors(idx)) {
      good[i] = inside.count(b.node(idx)) ? 1 : 0;
      continue;
    }
    std::size_t c = 0;
    for (auto s : b.successors(idx)) c += good[static_cast<std::size_t>(s)];
    good[i] = c >= keep_min ? 1 : 0;
  }
  if (!good[0]) return std::nullopt;
  NodeMask keep(n, 0);
  keep[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    for (auto s : b.successors(static_cast<NodeIndex>(i))) {
      if (good[static_cast<std::size_t>(s)]) keep[static_cast<std::size_t>(s)] = 1;
    }
  }
  return b.induced(keep);
}

namespace {

void check_leaf_name(const FinitePoset& poset, const WfTree& b, const QName<std::set<Node>>& a) {
  auto leaves = b.maximal();
  std::set<Node> mx(leaves.begin(), leaves.end());
  for (auto w : poset.worlds()) {
    const auto& s = a.at(w);
    if (!std::includes(mx.begin(), mx.end(), s.begin(), s.end())) {
      throw Error("NotSubset", "name assigns a non-maximal node in world " + poset.name(w));
    }
  }
}

// Maximal nodes forced inside (t) or outside (!t) A above q.
std::set<Node> forced_side(const FinitePoset& poset, Cond q, const std::vector<Node>& leaves,
                           const QName<std::set<Node>>& a, bool t) {
  std::set<Node> out;
  for (const auto& l : leaves) {
    if (forces(poset, q, [&](Cond w) { return (a.at(w).count(l) != 0) == t; })) out.insert(l);
  }
  return out;
}

}  // namespace

ShatteringReport is_nontree_shattering(const FinitePoset& poset, const WfTree& b,
                                       const std::vector<QName<std::set<Node>>>& names, const SurrogateParams& p) {
  ShatteringReport rep;
  const auto leaves = b.maximal();
  for (const auto& name : names) check_leaf_name(poset, b, name);
  for (Cond start = 0; start < poset.size(); ++start) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      bool found = false;
      for (auto q : poset.above(start)) {
        if (psb_inside(b, forced_side(poset, q, leaves, names[i], true), p.keep_min) ||
            psb_inside(b, forced_side(poset, q, leaves, names[i], false), p.keep_min)) {
          found = true;
          break;
        }
      }
      if (!found) {
        rep.ok = false;
        rep.failures.emplace_back(start, i);
      }
    }
  }
  return rep;
}

BigFamilyReport check_big_family(const std::vector<std::set<std::size_t>>& family, std::size_t universe,
                                 std::size_t trials, std::uint64_t seed, std::size_t exhaustive_bound,
                                 std::size_t max_counterexamples) {
  if (universe > 64) throw Error("SizeLimitExceeded", "universe above 64");
  std::vector<std::uint64_t> masks;
  for (const auto& a : family) {
    std::uint64_t m = 0;
    for (auto i : a) {
      if (i >= universe) throw Error("NotSubset", "member outside the universe");
      m |= std::uint64_t{1} << i;
    }
    masks.push_back(m);
  }
  const std::uint64_t all = universe == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << universe) - 1;
  BigFamilyReport rep;
  auto test = [&](std::uint64_t c) {
    ++rep.checked;
    bool mono = std::any_of(masks.begin(), masks.end(), [&](std::uint64_t a) { return (a & c) == 0 || (a & c) == a; });
    if (!mono) {
      rep.big = false;
      rep.counterexamples.push_back(c);
    }
    return rep.counterexamples.size() < max_counterexamples;
  };
  if (universe < 64 && (std::uint64_t{1} << universe) <= exhaustive_bound) {
    for (std::uint64_t c = 0; c <= all; ++c) {
      if (!test(c)) break;
    }
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < trials; ++i) {
      if (!test(rng() & all)) break;
    }
  }
  return rep;
}

bool check_fg_bounding_witness(const FinitePoset& poset, const QName<Seq>& eta, const std::vector<std::set<Value>>& w,
                               const std::vector<Value>& f, const std::vector<Value>& g) {
  const std::size_t n = w.size();
  if (f.size() != n || g.size() != n) throw Error("ShapeMismatch", "w, f and g differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i] > f[i]) throw Error("ShapeMismatch", "g exceeds f at " + std::to_string(i));
  }
  for (auto world : poset.worlds()) {
    if (eta.at(world).size() < n) throw Error("ShapeMismatch", "sequence shorter than w in world " + poset.name(world));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<Value>(w[i].size()) > g[i]) return false;
    if (!w[i].empty() && (*w[i].begin() < 0 || *w[i].rbegin() >= f[i])) return false;
    for (auto world : poset.worlds()) {
      if (!w[i].count(eta.at(world)[i])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

bool homogeneous(const FinitePoset& poset, Cond q, const WfTree& sub, const QName<std::set<Node>>& a, bool t) {
  const auto leaves = sub.maximal();
  return forces(poset, q, [&](Cond w) {
    return std::all_of(leaves.begin(), leaves.end(), [&](const Node& l) { return (a.at(w).count(l) != 0) == t; });
  });
}

namespace {

Homogenized homogenize_rec(const FinitePoset& poset, Cond p, const WfTree& b, const QName<std::set<Node>>& a,
                           const SurrogateParams& params);

// The per-world selector of the simulated play over decreasing positive subtrees of one cone.
struct ConeGame {
  std::vector<WfTree> psb;
  std::map<WfTree, Value> index;
  WfTree cone = WfTree::singleton(Node{});
  std::map<std::pair<Cond, Seq>, std::pair<Value, bool>> memo;

  const WfTree& last(const Seq& s) const { return s.empty() ? cone : psb[static_cast<std::size_t>(s.back())]; }
};

Homogenized homogenize_rec(const FinitePoset& poset, Cond p, const WfTree& b, const QName<std::set<Node>>& a,
                           const SurrogateParams& params) {
  const auto d = depth(b);
  if (d == 0) {
    for (auto q : poset.above(p)) {
      for (bool t : {true, false}) {
        if (homogeneous(poset, q, b, a, t)) return {q, b, t, 0};
      }
    }
    throw Error("BignessUnavailable", "no condition decides the root");
  }
  const auto succ = b.successor_nodes(b.root());
  if (d == 1) {
    for (auto q : poset.above(p)) {
      auto in = forced_side(poset, q, succ, a, true);
      auto out = forced_side(poset, q, succ, a, false);
      bool t = in.size() >= out.size();
      const auto& side = t ? in : out;
      if (side.size() < params.keep_min) continue;
      std::vector<Node> nodes{b.root()};
      nodes.insert(nodes.end(), side.begin(), side.end());
      return {q, WfTree::from_nodes(nodes), t, 0};
    }
    throw Error("BignessUnavailable", "no condition decides keep_min successors alike");
  }

  std::vector<std::shared_ptr<ConeGame>> games;
  for (const auto& nu : succ) {
    auto g = std::make_shared<ConeGame>();
    g->cone = restrict(b, nu);
    g->psb = enumerate_psb(g->cone, params.keep_min, 1u << 16);
    for (std::size_t j = 0; j < g->psb.size(); ++j) g->index[g->psb[j]] = static_cast<Value>(j);
    games.push_back(std::move(g));
  }
  auto choose = [&poset, &a, &params](ConeGame& g, Cond w, const Seq& s) {
    auto key = std::make_pair(w, s);
    auto it = g.memo.find(key);
    if (it != g.memo.end()) return it->second;
    std::pair<Value, bool> r;
    try {
      auto h = homogenize_rec(poset, w, g.last(s), a, params);
      r = {g.index.at(h.subtree), h.t};
    } catch (const Error& e) {
      // Too narrow to split below the first level; staying put keeps the move legal.
      if (s.empty() || e.code() != "BignessUnavailable") throw;
      r = {s.back(), false};
    }
    g.memo.emplace(key, r);
    return r;
  };
  NuStrategy<SbMove, Seq> nu = [&](const SbTranscript& tr, std::uint64_t) {
    auto g = games.at(tr.rounds.size());
    SbMove m;
    m.successors = [g, &params](const Seq& s) {
      std::vector<Value> out;
      const WfTree& from = g->last(s);
      for (std::size_t j = 0; j < g->psb.size(); ++j) {
        if (check_psb(g->psb[j], from, params)) out.push_back(static_cast<Value>(j));
      }
      return out;
    };
    m.selector = [g, choose](Cond w, const Seq& s) { return choose(*g, w, s).first; };
    return m;
  };

  for (auto star : poset.worlds_above(p)) {
    BndStrategy<SbMove, Seq> bnd = [star](const SbTranscript&, const SbMove& m, std::uint64_t) {
      return Seq{m.selector(star, {})};
    };
    auto tr = play_sb(poset, p, nu, bnd, games.size(), 0, 2);
    if (!tr.bnd_wins) continue;
    // Stabilize the truth values on keep_min rounds.
    for (auto r : poset.above(*tr.witness)) {
      std::vector<std::size_t> by_t[2];
      for (std::size_t n = 0; n < games.size(); ++n) {
        for (bool t : {true, false}) {
          bool fixed = forces(poset, r, [&](Cond w) { return choose(*games[n], w, {}).second == t; });
          if (fixed) by_t[t].push_back(n);
        }
      }
      bool t = by_t[1].size() >= by_t[0].size();
      if (by_t[t].size() < params.keep_min) continue;
      std::vector<Node> nodes{b.root()};
      for (auto n : by_t[t]) {
        const auto& chosen = games[n]->psb[static_cast<std::size_t>(tr.rounds[n].second.front())];
        nodes.insert(nodes.end(), chosen.nodes().begin(), chosen.nodes().end());
      }
      return {r, WfTree::from_nodes(nodes), t, games.size()};
    }
  }
  throw Error("BignessUnavailable", "no condition stabilizes keep_min truth values");
}

}  // namespace

Homogenized homogenize(const FinitePoset& poset, Cond p, const WfTree& b, const QName<std::set<Node>>& a,
                       const SurrogateParams& params) {
  check_leaf_name(poset, b, a);
  return homogenize_rec(poset, p, b, a, params);
}

}  // namespace wft
