#pragma once

#include <stdexcept>
#include <string>

namespace wft {

/// Domain error carrying a stable machine-readable code such as
/// "NodeNotInTree" or "CoherenceViolation". The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(detail) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

/// Input that does not match a documented schema. The CLI maps these to exit 2.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wft
