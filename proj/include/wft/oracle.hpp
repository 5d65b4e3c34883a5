#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wft/tree.hpp"

namespace wft {

struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// Skipped instances whose hypothesis does not hold at this scale.
  std::size_t skipped = 0;
  std::vector<std::string> counterexamples;

  bool pass() const { return checked > 0 && failures == 0; }
};

struct OracleReport {
  std::string family;
  std::vector<PropertyResult> properties;
  double seconds = 0;

  bool pass() const;
};

struct OracleConfig {
  SurrogateParams params;
  std::uint32_t depth = 2;
  /// Directions available at each node of enumerated trees.
  std::uint32_t directions = 5;
  /// Budgets 1..max_budget are swept where a suite takes a budget.
  std::uint32_t max_budget = 2;
  std::size_t worlds = 3;
  std::size_t rounds = 3;
  std::size_t steps = 50;
  std::size_t seeds = 10;
  /// Random draws per instance.
  std::size_t samples = 2;
  /// Pairwise properties run on every stride-th enumerated tree.
  std::size_t stride = 1;
  /// Random instances for sampled suites.
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// Largest enumerated family.
  std::size_t cap = 1u << 16;
};

/// Every tree rooted at <> of depth <= depth whose internal nodes use at
/// least `width` of the directions 0..directions-1. Throws Error("CapExceeded").
std::vector<WfTree> enumerate_valid_trees(std::uint32_t width, std::uint32_t depth, std::uint32_t directions,
                                          std::size_t cap);

/// order-laws, coherent-fronts, filter, decide-subset, canonize, driver, game-translations, homogenize.
std::vector<std::string> oracle_families();

/// Throws Error("UnknownFamily") and Error("CapExceeded").
OracleReport run_oracle(const std::string& family, const OracleConfig& cfg);

}  // namespace wft
