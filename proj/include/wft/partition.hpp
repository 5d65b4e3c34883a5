#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wft/tree.hpp"

namespace wft {

/// Node -> natural value, total on its domain (a front or max(B)).
using Coloring = std::map<Node, std::uint64_t>;

struct DecisionResult {
  /// true: Y ∩ subtree ⊆ Z; false: Y ∩ subtree ⊆ Y∖Z.
  bool side = true;
  WfTree subtree = WfTree::singleton(Node{});
  /// t_nu for every node of the input at or below Y.
  std::map<Node, bool> trace;
  /// Y_nu: the members of Y ∩ subtree above nu.
  std::vector<Node> y_of(const Node& nu, std::span<const Node> ys) const;
};

/// Majority decision by downward induction. Throws Error("NotFront"),
/// Error("NotSubset"), and Error("WidthTooSmall") when a majority side keeps
/// fewer than keep_min successors.
DecisionResult decide_subset(const WfTree& t, std::span<const Node> ys, std::span<const Node> zs,
                             const SurrogateParams& p);

struct CanonicalForm {
  WfTree subtree = WfTree::singleton(Node{});
  std::vector<Node> front;
  /// k_nu over the subtree: value+1 when the cone at nu is constant, else 0.
  std::map<Node, std::uint64_t> k;
};

/// Successor count kept at every internal node of a canonized subtree.
std::uint32_t canonical_branching(const SurrogateParams& p);

/// Thins t to a positive subtree on which c is canonical. Throws
/// Error("WidthTooSmall"), Error("NotTotal") when c misses a maximal node, and
/// Error("CanonizationFailed") when the bounded candidate search finds nothing.
CanonicalForm canonize(const WfTree& t, const Coloring& c, const SurrogateParams& p);

/// The front Y with c(eta)=c(nu) ⇔ some rho ∈ Y lies below both, if one exists.
/// It is the set of minimal nodes with a constant cone.
std::optional<std::vector<Node>> canonical_front(const WfTree& t, const Coloring& c);

/// Exact check of the canonical biconditional for a given front.
bool is_canonical(const WfTree& t, const Coloring& c, std::span<const Node> front);

struct Uniformized {
  WfTree subtree = WfTree::singleton(Node{});
  std::vector<Node> front;  // Y'
  Coloring h;               // h' on Y'
};

/// Throws as canonize, plus Error("NotFront").
Uniformized uniformize(const WfTree& t, std::span<const Node> ys, const Coloring& h, const SurrogateParams& p);

enum class FamilyMode { big, large };

struct FamilyReport {
  bool ok = true;
  bool exhaustive = false;
  std::size_t checked = 0;
  std::vector<Coloring> counterexamples;
};

/// Searches colorings of max(t) for one that no member of tset handles:
/// constant on max(B') (big) or canonical on B' (large). Exhaustive when the
/// coloring space has at most `exhaustive_bound` members, otherwise `trials`
/// seeded samples. Stops after `max_counterexamples`.
FamilyReport check_family(const std::vector<WfTree>& tset, const WfTree& t, FamilyMode mode, std::size_t trials,
                          std::uint64_t seed, std::size_t exhaustive_bound = 1u << 16,
                          std::size_t max_counterexamples = 8);

}  // namespace wft
