#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "wft/tree.hpp"

namespace wft {

/// Removed successors per node. Applying it to the host yields the pruned
/// subtree; the nodes kept are exactly those avoiding every removed successor.
struct SbWitness {
  std::map<Node, std::vector<Node>> pruned;

  std::size_t max_removed() const;
  bool empty() const { return pruned.empty(); }
};

/// The subtree of `host` avoiding every removed successor.
WfTree apply_pruning(const WfTree& host, const SbWitness& w);

enum class FrontKind { front, almost_front, antichain_only, not_antichain };
const char* to_string(FrontKind k) noexcept;

struct FrontClassification {
  FrontKind kind = FrontKind::not_antichain;
  /// Empty for a front; the pruning found by the search for an almost front.
  SbWitness witness;
};

bool is_antichain(std::span<const Node> ys);

/// Every branch of t meets the flagged set.
bool meets_every_branch(const WfTree& t, const NodeMask& ys);

/// Downward search for a pruning of at most `budget` successors per node
/// (always keeping one) after which every remaining branch meets `ys`.
std::optional<SbWitness> almost_front_witness(const WfTree& t, const NodeMask& ys, std::uint32_t budget);
bool is_almost_front(const WfTree& t, const NodeMask& ys, std::uint32_t budget);

/// Requires ys ⊆ t (Error "NodeNotInTree").
FrontClassification classify_front(const WfTree& t, std::span<const Node> ys, const SurrogateParams& p);

/// Every member of `upper` extends some member of `lower`.
bool is_above(std::span<const Node> lower, std::span<const Node> upper);

/// h(eta) = the member of y1 below eta, for those eta in y2 that have one.
/// Throws Error("NotAntichain").
std::map<Node, Node> projection(std::span<const Node> y1, std::span<const Node> y2);

/// Exhaustive-subtree check. Returns the removal witness, or nullopt when `sub`
/// is not inside `host` or removes too much somewhere.
/// Throws Error("RootMismatch") and Error("CoherenceViolation").
std::optional<SbWitness> check_sb(const WfTree& sub, const WfTree& host, const SurrogateParams& p);

/// Positive-subtree check: same root, coherent, keeps >= keep_min successors
/// at every node of `sub` that is internal in `host`.
bool check_psb(const WfTree& sub, const WfTree& host, const SurrogateParams& p);

struct LeqStarOptions {
  std::size_t max_candidates = 200000;
  /// Budget for almost fronts on the t2 side; defaults to p.budget. Passing
  /// 2k accounts for a pruning composed with another pruning.
  std::optional<std::uint32_t> target_budget;
};

struct LeqStarVerdict {
  bool holds = false;
  std::optional<WfTree> witness;
};

/// t1 <=* t2: some pruning t2' of t2 has t2' ∩ t1 positive in t1, and every
/// almost front of t2' ∩ t1 (budget k) is an almost front of t2 (target budget).
/// Throws Error("SizeLimitExceeded") when the candidate search exceeds the limit.
LeqStarVerdict leq_star(const WfTree& t1, const WfTree& t2, const SurrogateParams& p,
                        const LeqStarOptions& opts = {});

/// The characterization by almost fronts: every almost front of t1 (budget k)
/// is an almost front of t2 (target budget, default k). False when roots differ.
bool leq_star_by_fronts(const WfTree& t1, const WfTree& t2, const SurrogateParams& p,
                        std::optional<std::uint32_t> target_budget = std::nullopt);

/// An antichain Y ⊆ src that is an almost front of src with budget `src_budget`
/// but not an almost front of dst with budget `dst_budget`, if one exists.
/// Both trees must share their root. Linear in |src ∪ dst|.
std::optional<std::vector<Node>> front_transfer_counterexample(const WfTree& src, std::uint32_t src_budget,
                                                               const WfTree& dst, std::uint32_t dst_budget);

struct FilterDecision {
  bool member = false;
  std::optional<SbWitness> witness;
};

/// X ∈ D_{B,Y}: some pruning within budget leaves every remaining branch
/// meeting Y inside X. Throws Error("NotAlmostFront") and Error("NotSubset").
FilterDecision filter_member(const WfTree& t, std::span<const Node> ys, std::span<const Node> xs,
                             const SurrogateParams& p);

/// Index-mask form used on large trees. No precondition checks.
bool filter_member_mask(const WfTree& t, const NodeMask& ys, const NodeMask& xs, std::uint32_t budget);

/// C ∈ id(nu, B): C occupies fewer than direction_threshold immediate directions of nu.
/// Throws Error("NodeNotInTree") / Error("NotSubset").
bool ideal_member(const WfTree& t, const Node& at, std::span<const Node> c, const SurrogateParams& p);

// Seeded samplers for property tests.
/// A positive subtree keeping a random subset of size >= keep_min at each internal node.
WfTree sample_psb(const WfTree& host, std::uint32_t keep_min, std::mt19937_64& rng);
/// Removes at most `budget` random successors per internal node, keeping one.
SbWitness sample_pruning(const WfTree& host, std::uint32_t budget, std::mt19937_64& rng);
/// A random front; with `avoid_root` the root is never chosen unless it is a leaf.
std::vector<Node> sample_front(const WfTree& t, std::mt19937_64& rng, bool avoid_root = false);

// Enumerators for the brute-force oracles. Each throws Error("SizeLimitExceeded")
// past `cap` results.
std::vector<NodeMask> enumerate_antichains(const WfTree& t, std::size_t cap = 1u << 22);
std::vector<WfTree> enumerate_sb(const WfTree& host, std::uint32_t budget, std::size_t cap = 1u << 20);
std::vector<WfTree> enumerate_psb(const WfTree& host, std::uint32_t keep_min, std::size_t cap = 1u << 20);

}  // namespace wft
