#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace wft {

/// A finite sequence of naturals, ordered by "is an initial segment of".
/// The empty sequence is the least element of the ground order.
class Node {
 public:
  using value_type = std::uint32_t;

  Node() = default;
  explicit Node(std::vector<value_type> path) : path_(std::move(path)) {}
  Node(std::initializer_list<value_type> path) : path_(path) {}

  const std::vector<value_type>& path() const noexcept { return path_; }
  std::size_t length() const noexcept { return path_.size(); }
  bool is_root() const noexcept { return path_.empty(); }
  value_type operator[](std::size_t i) const { return path_[i]; }

  /// True iff this node is an initial segment of `other` (not necessarily proper).
  bool is_prefix_of(const Node& other) const noexcept;
  bool is_proper_prefix_of(const Node& other) const noexcept {
    return path_.size() < other.path_.size() && is_prefix_of(other);
  }
  bool comparable(const Node& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  /// The initial segment of length `len` (len <= length()).
  Node prefix(std::size_t len) const;
  Node child(value_type d) const;

  /// Index of the immediate child of `ancestor` through which this node passes.
  /// Requires ancestor to be a proper prefix.
  value_type direction_from(const Node& ancestor) const { return path_[ancestor.length()]; }

  std::string to_string() const;

  // Lexicographic; every node sorts directly before its extensions.
  friend auto operator<=>(const Node&, const Node&) = default;
  friend bool operator==(const Node&, const Node&) = default;

 private:
  std::vector<value_type> path_;
};

enum class Ordering { LT, GT, EQ, INCOMPARABLE };

Ordering compare(const Node& a, const Node& b) noexcept;
const char* to_string(Ordering o) noexcept;

struct NodeHash {
  std::size_t operator()(const Node& n) const noexcept;
};

}  // namespace wft
