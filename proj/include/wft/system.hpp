#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wft/partition.hpp"
#include "wft/tree.hpp"

namespace wft {

/// A finite approximation system: a ground set inside the prefix order, a
/// family of trees at each realized node, and an order on the root family.
struct ApproxSystem {
  Node root;
  std::set<Node> ground;
  std::map<Node, std::set<WfTree>> families;
  /// Pairs (B1, B2) with B1 <= B2, reflexive pairs included.
  std::set<std::pair<WfTree, WfTree>> order;

  /// The root family without the singleton.
  std::vector<WfTree> top_family() const;
  bool in_top_family(const WfTree& b) const;
  bool leq(const WfTree& a, const WfTree& b) const { return order.count({a, b}) != 0; }
  /// |ground| plus the total family size.
  std::size_t size() const;
  /// The member above every other, if any.
  std::optional<WfTree> maximum() const;
  bool is_maximal(const WfTree& b) const;

  friend bool operator==(const ApproxSystem&, const ApproxSystem&) = default;
};

/// Clauses "a"-"h". Clause "c" requires family trees to live in the ground and
/// keep at least keep_min successors at internal nodes; "g" runs leq_star.
ValidationReport validate_system(const ApproxSystem& x, const SurrogateParams& p);

bool leq_K(const ApproxSystem& x, const ApproxSystem& y);

/// Componentwise union. Throws Error("NotIncreasing").
ApproxSystem chain_union(const std::vector<ApproxSystem>& xs);

ApproxSystem seed_system();

/// Adds `width` fresh children of eta (least unused indices) and their fan.
/// Throws Error("NodeNotInTree") and Error("FamilyNotSingleton").
ApproxSystem sprout(const ApproxSystem& x, const Node& eta, const SurrogateParams& p);

/// Returns x when the root family has a maximum. With an explicit increasing
/// chain, builds the diagonal tree over it and puts it on top.
/// Throws Error("PreconditionFailed") on an empty root family or a bad chain,
/// Error("DiagonalExhausted") when no diagonal node is left at some step, and
/// Error("AmalgamationFailed") when the diagonal tree is not above every member.
ApproxSystem amalgamate(const ApproxSystem& x, const SurrogateParams& p,
                        const std::vector<WfTree>& chain = {});

/// Thins the maximal member b to pairwise distinct directions avoiding the
/// enumerated ground, adds the thinned cones, and puts the result on top.
/// Throws Error("NotMaximal") and Error("DiagonalExhausted").
ApproxSystem maximalize(const ApproxSystem& x, const WfTree& b, const SurrogateParams& p);

enum class AdjoinKind { psb, sb };

/// Adds b2 (with its restrictions) next to b1. Throws Error("PreconditionFailed")
/// naming the violated requirement.
ApproxSystem adjoin(const ApproxSystem& x, const WfTree& b1, const WfTree& b2, AdjoinKind kind,
                    const SurrogateParams& p);

/// Extends the maximum by the least nontrivial family member at each of its
/// leaves that has one, and puts the result on top. Throws Error("PreconditionFailed").
ApproxSystem graft(const ApproxSystem& x, const SurrogateParams& p);

struct AdjectiveFlag {
  bool value = true;
  bool exhaustive = true;
  std::string evidence;
};

struct AdjectiveFlags {
  AdjectiveFlag fat, big, large, full, principal;
};

struct AdjectiveOptions {
  /// Largest coloring space searched exhaustively; larger ones are sampled.
  std::size_t coloring_bound = 1u << 12;
  std::size_t trials = 256;
  std::uint64_t seed = 0;
  /// Cap on enumerated sb/psb subtrees per tree.
  std::size_t subtree_cap = 1u << 12;
};

AdjectiveFlags check_adjectives(const ApproxSystem& x, const SurrogateParams& p, const AdjectiveOptions& opts = {});

/// Family I is dense: inside the system, and every member of the root family
/// lies below some B2 whose root successors with cones in I cannot be avoided
/// by any set of at most `budget` non-root ground nodes.
bool is_dense(const ApproxSystem& x, const std::set<WfTree>& fam, const SurrogateParams& p);
/// Inside the system and closed upward under leq_star among the system's trees.
bool is_open(const ApproxSystem& x, const std::set<WfTree>& fam, const SurrogateParams& p);
/// For b1 in the root family, some B2 >= b1 has all but at most `budget` root
/// successor cones in I.
bool is_good_for(const ApproxSystem& x, const std::set<WfTree>& fam, const WfTree& b1, const SurrogateParams& p);

struct Obligation {
  std::size_t step = 0;
  std::string kind;    // "big", "large", "fat", "full", "clause-c", ...
  std::string status;  // "discharged" or "infeasible"
  std::string detail;
  std::optional<WfTree> target;
  std::optional<WfTree> subtree;
  std::optional<Coloring> coloring;
  std::optional<Node> at;
};

struct DriverResult {
  ApproxSystem system;
  std::vector<Obligation> ledger;
  /// The system after each step, first entry after step 1.
  std::vector<ApproxSystem> history;
};

/// Step 1 seeds, step 2 sprouts the root, later steps rotate through union,
/// bigness, largeness, fat/full, maximalization and sprout+graft.
/// Builder errors are rethrown as Error(code, "step N: ...").
DriverResult run_driver(std::size_t steps, const SurrogateParams& p, std::uint64_t seed);

/// Re-checks every discharged obligation against the system.
std::vector<std::string> replay_ledger(const ApproxSystem& x, const std::vector<Obligation>& ledger,
                                       const SurrogateParams& p);

}  // namespace wft
