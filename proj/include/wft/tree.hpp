#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wft/error.hpp"
#include "wft/node.hpp"

namespace wft {

/// Finite stand-ins for the infinitary quantifiers on successor sets.
///   width            - "infinite successor set" becomes "at least `width` successors"
///   budget           - "finitely many removed" becomes "at most `budget` removed per node"
///   keep_min         - "infinitely many kept" becomes "at least `keep_min` kept"
///   direction_threshold - a successor set is ideal-small when it uses fewer directions
struct SurrogateParams {
  std::uint32_t width = 4;
  std::uint32_t budget = 1;
  std::uint32_t keep_min = 2;
  std::uint32_t direction_threshold = 2;

  /// Throws Error("InvalidParams") unless m <= w, k < w, tau <= w, w >= 2, m >= 1.
  void check() const;
};

struct Violation {
  std::string clause;
  std::vector<Node> witnesses;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  bool violates(const std::string& clause) const;
};

using NodeIndex = std::int32_t;
/// Membership flags indexed by a tree's node indices.
using NodeMask = std::vector<char>;

/// A finite rooted subtree of the prefix order. Nodes are held in ascending
/// lexicographic order, so index 0 is the root and every parent precedes its
/// children. Successor lists are the minimal tree members strictly above a node.
class WfTree {
 public:
  static WfTree singleton(Node root);

  /// Builds the tree induced on a node set. Throws Error("NotATree") when the
  /// set is empty or has no member that is a prefix of every other member.
  /// `elided_internal` marks nodes declared internal whose successors are not listed.
  static WfTree from_nodes(std::vector<Node> nodes, const std::vector<Node>& elided_internal = {});

  /// The full tree of immediate extensions with `width` children per node.
  static WfTree uniform(const Node& root, std::uint32_t width, std::uint32_t depth);

  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& root() const noexcept { return nodes_.front(); }
  const Node& node(NodeIndex i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  NodeIndex parent(NodeIndex i) const { return parent_[static_cast<std::size_t>(i)]; }
  std::span<const NodeIndex> successors(NodeIndex i) const {
    return succ_[static_cast<std::size_t>(i)];
  }
  bool has_successors(NodeIndex i) const { return !succ_[static_cast<std::size_t>(i)].empty(); }
  /// Internal means "has successors or was declared internal with them elided".
  bool is_internal(NodeIndex i) const { return internal_[static_cast<std::size_t>(i)] != 0; }

  std::optional<NodeIndex> find(const Node& n) const;
  bool contains(const Node& n) const { return find(n).has_value(); }
  /// Throws Error("NodeNotInTree").
  NodeIndex index_of(const Node& n) const;

  std::vector<Node> successor_nodes(const Node& n) const;
  /// max(B): the nodes without successors.
  std::vector<Node> maximal() const;
  std::vector<NodeIndex> maximal_indices() const;
  bool is_singleton() const noexcept { return nodes_.size() == 1; }

  /// Throws Error("NodeNotInTree") if any node is missing.
  NodeMask mask_of(std::span<const Node> members) const;
  std::vector<Node> nodes_of(const NodeMask& mask) const;

  /// The tree induced on the flagged nodes; the root must be flagged.
  WfTree induced(const NodeMask& mask) const;

  /// True iff every node of this tree is a node of `other`.
  bool subset_of(const WfTree& other) const;

  friend bool operator==(const WfTree& a, const WfTree& b) {
    return a.nodes_ == b.nodes_ && a.internal_ == b.internal_;
  }
  friend auto operator<=>(const WfTree& a, const WfTree& b) {
    if (auto c = a.nodes_ <=> b.nodes_; c != 0) return c;
    return a.internal_ <=> b.internal_;
  }

 private:
  void link();

  std::vector<Node> nodes_;
  std::vector<NodeIndex> parent_;
  std::vector<std::vector<NodeIndex>> succ_;
  std::vector<char> internal_;
};

/// Structural clauses of a countable well-founded subtree plus the width and
/// direction surrogates. Clauses are named "a", "b", "c", "d", "e", "f".
ValidationReport validate_cwt(const WfTree& t, const SurrogateParams& p);

/// Number of successors of `at` incomparable with every member of `obstructions`.
/// The exact finite check behind the direction surrogate of clause (f).
std::size_t count_avoiding(const WfTree& t, const Node& at, std::span<const Node> obstructions);

/// Rank: 0 for a singleton, otherwise 1 + max rank over the root's successors.
std::uint32_t depth(const WfTree& t);

/// B restricted to the nodes extending `at`. Throws Error("NodeNotInTree").
WfTree restrict(const WfTree& t, const Node& at);

/// Downward hull of `front` inside t. Throws Error("NodeNotInTree").
WfTree below_front(const WfTree& t, std::span<const Node> front);

/// Root-to-leaf index paths.
std::vector<std::vector<NodeIndex>> branches(const WfTree& t);

}  // namespace wft
