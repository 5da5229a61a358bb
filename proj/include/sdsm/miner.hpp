#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sdsm/trajectory.hpp"

namespace sdsm {

struct MiningConfig {
  double eps = 1.0;
  int min_len = 5;
  int top_k = 5;
  int perms = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Throws ConfigError on violated bounds (eps >= 0, min_len >= 2,
// 1 <= top_k <= min_len, perms >= 1, 0 < alpha < (perms-1)/perms,
// threads >= 1).
void validate(const MiningConfig& config);

struct DiscoveryRecord {
  SubTrajRef ref;
  int sup_pos = 0;
  int sup_neg = 0;
  int sup_total = 0;
  double p_value = 1.0;
  double adjusted_p = 1.0;

  friend bool operator==(const DiscoveryRecord&, const DiscoveryRecord&) = default;
};

struct Diagnostics {
  std::uint64_t nodes_visited = 0;    // enumeration-phase nodes
  std::uint64_t chains_pruned = 0;    // chains cut by the lower-bound test
  std::uint64_t tests_evaluated = 0;  // permutation p-value evaluations
  std::vector<double> bottom_k_min_p;
};

struct MiningResult {
  double delta_star = 0.0;
  std::vector<DiscoveryRecord> discoveries;  // ascending (p_value, traj, start, end)
  Diagnostics diag;
};

// Enumeration-phase callback, fired once per visited node in traversal
// order. Setting an observer forces a single-threaded run. `members` are the
// dense indices of the node's support; `sup_pos` counts the true labeling.
struct NodeVisit {
  SubTrajRef ref;
  std::vector<int> members;
  int sup_pos = 0;
  int sup_total = 0;
  double lower_bound = 1.0;
  bool pruned = false;
};
using NodeObserver = std::function<void(const NodeVisit&)>;

// Full pruned run: chain enumeration with simultaneous null-distribution
// estimation, delta* calibration, then a second pruned traversal under the
// true labels emitting every window with p < delta*.
MiningResult mine(const LabeledDataset& dataset, const MiningConfig& config,
                  const NodeObserver& observer = {});

// Unpruned baseline: same contract and outputs, but every node of every
// chain is visited and all permutation p-values are evaluated at each node.
// Exists as the correctness oracle and speed baseline for mine().
MiningResult oracle_mine(const LabeledDataset& dataset, const MiningConfig& config,
                         const NodeObserver& observer = {});

// p * (alpha / delta_star); requires delta_star > 0 and p < delta_star.
double adjusted_p(double p, double alpha, double delta_star);

}  // namespace sdsm
