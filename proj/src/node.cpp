#include "wft/node.hpp"

#include <algorithm>

namespace wft {

bool Node::is_prefix_of(const Node& other) const noexcept {
  if (path_.size() > other.path_.size()) return false;
  return std::equal(path_.begin(), path_.end(), other.path_.begin());
}

Node Node::prefix(std::size_t len) const {
  return Node(std::vector<value_type>(path_.begin(), path_.begin() + static_cast<std::ptrdiff_t>(len)));
}

Node Node::child(value_type d) const {
  auto p = path_;
  p.push_back(d);
  return Node(std::move(p));
}

std::string Node::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(path_[i]);
  }
  return s + ">";
}

Ordering compare(const Node& a, const Node& b) noexcept {
  if (a == b) return Ordering::EQ;
  if (a.is_prefix_of(b)) return Ordering::LT;
  if (b.is_prefix_of(a)) return Ordering::GT;
  return Ordering::INCOMPARABLE;
}

const char* to_string(Ordering o) noexcept {
  switch (o) {
    case Ordering::LT: return "LT";
    case Ordering::GT: return "GT";
    case Ordering::EQ: return "EQ";
    case Ordering::INCOMPARABLE: return "INCOMPARABLE";
  }
  return "?";
}

std::size_t NodeHash::operator()(const Node& n) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : n.path()) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h ^ n.length();
}

}  // namespace wft
