// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "wft/oracle.hpp"
#include "wft/partition.hpp"
#include "wft/subtree.hpp"

using namespace wft;

namespace {

constexpr double kOrderLawsSeconds = 300;
constexpr double kHomogenizeSeconds = 60;
constexpr double kPerfSeconds = 2;
// Allowed growth of runtime per 10x growth in node count.
constexpr double kLinearRatio = 20;

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
  std::printf("criterion %d %s: %s (%s)\n", id, what.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string summary(const OracleReport& r) {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  for (const auto& p : r.properties) {
    checked += p.checked;
    failed += p.failures;
    skipped += p.skipped;
  }
  std::string s = std::to_string(r.properties.size()) + " properties, " + std::to_string(checked) + " checked, " +
                  std::to_string(failed) + " failed, " + std::to_string(skipped) + " skipped, " +
                  std::to_string(r.seconds) + " s";
  for (const auto& p : r.properties) {
    if (!p.pass()) s += "; " + p.name + " failed " + std::to_string(p.failures) + "/" + std::to_string(p.checked);
  }
  return s;
}

void oracle_criterion(int id, const std::string& family, const OracleConfig& cfg, double limit = 0) {
  auto r = run_oracle(family, cfg);
  bool ok = r.pass() && (limit == 0 || r.seconds < limit);
  report(id, family, ok, summary(r) + (limit > 0 ? ", limit " + std::to_string(limit) + " s" : ""));
}

double best_of(int runs, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < runs; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

struct Timing {
  double filter = 0;
  double decide = 0;
  std::size_t nodes = 0;
};

Timing time_tree(std::uint32_t depth) {
  SurrogateParams p{10, 1, 2, 2};
  auto t = WfTree::uniform(Node{}, 10, depth);
  std::mt19937_64 rng(depth);
  auto leaves = t.maximal();
  NodeMask ys(t.size(), 0);
  NodeMask xs(t.size(), 0);
  std::vector<Node> zs;
  for (auto i : t.maximal_indices()) {
    ys[static_cast<std::size_t>(i)] = 1;
    xs[static_cast<std::size_t>(i)] = rng() % 10 != 0;
  }
  for (const auto& n : leaves) {
    if (rng() % 2) zs.push_back(n);
  }
  Timing out;
  out.nodes = t.size();
  bool member = false;
  out.filter = best_of(7, [&] { member = filter_member_mask(t, ys, xs, p.budget); });
  out.decide = best_of(7, [&] { decide_subset(t, leaves, zs, p); });
  (void)member;
  return out;
}

void performance_criterion() {
  auto small = time_tree(5);
  auto big = time_tree(6);
  double filter_ratio = big.filter / std::max(small.filter, 1e-6);
  double decide_ratio = big.decide / std::max(small.decide, 1e-6);
  bool ok = big.nodes >= 1000000 && big.filter < kPerfSeconds && big.decide < kPerfSeconds &&
            filter_ratio < kLinearRatio && decide_ratio < kLinearRatio;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%zu nodes: filter %.3f s, decide %.3f s; %zu nodes: filter %.4f s, decide %.4f s; "
                "10x ratios %.1f and %.1f, limits %.0f s and %.0f",
                big.nodes, big.filter, big.decide, small.nodes, small.filter, small.decide, filter_ratio, decide_ratio,
                kPerfSeconds, kLinearRatio);
  report(9, "performance", ok, buf);
}

}  // namespace

int main() {
  OracleConfig base;

  oracle_criterion(1, "order-laws", base, kOrderLawsSeconds);
  oracle_criterion(2, "coherent-fronts", base);

  OracleConfig filter = base;
  filter.trials = 1000;
  oracle_criterion(3, "filter", filter);

  oracle_criterion(4, "decide-subset", base);

  OracleConfig canon = base;
  canon.trials = 10000;
  oracle_criterion(5, "canonize", canon);

  OracleConfig driver = base;
  driver.steps = 50;
  driver.seeds = 10;
  oracle_criterion(6, "driver", driver);

  OracleConfig games = base;
  games.worlds = 3;
  games.rounds = 3;
  oracle_criterion(7, "game-translations", games);

  oracle_criterion(8, "homogenize", base, kHomogenizeSeconds);

  performance_criterion();

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
