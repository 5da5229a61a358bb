#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sdsm/distance.hpp"
#include "sdsm/trajectory.hpp"

namespace sdsm {

// One member of a window's epsilon-similar-neighborhood. The neighbor window
// starts at `start` in trajectory `traj` and has the same length as the node
// it belongs to; `topk` is the incremental distance state of the pair and is
// what gets extended when the chain grows.
struct NeighborEntry {
  int traj = 0;
  int start = 0;
  TopKState topk;
};

using NeighborSet = std::vector<NeighborEntry>;

// Exhaustive scan for every same-length window within avg-top-K-max distance
// eps of `window`, excluding only the identical (traj, start) window. Exact:
// the only shortcuts taken are provable non-matches (a single pointwise
// distance above K*eps, or a partial top-K average already above eps).
// Result is ordered by (traj, start).
NeighborSet epsilon_neighbors(const LabeledDataset& dataset, const SubTrajRef& window,
                              double eps, int k);

// In-place one-point extension: `node` is the pre-extension window (its
// extension node.end + 1 must exist). Each neighbor whose own next point
// exists absorbs the new pointwise distance and is kept iff still within
// eps. By the distance monotonicity property this loses no true neighbor of
// the extended node.
void extend_neighbors(const LabeledDataset& dataset, const SubTrajRef& node,
                      NeighborSet& neighbors, double eps);

// Grid over the first points of all same-length windows. Speeds up repeated
// seed scans: a window whose first point is farther than K*eps away already
// has a pointwise distance above K*eps, so with cells of at least K*eps only
// the 3x3 cell block around the query can hold neighbors. Exact: neighbors()
// returns exactly what epsilon_neighbors() returns, for any query with
// k*eps <= max_slab.
class SeedIndex {
 public:
  SeedIndex(const LabeledDataset& dataset, int len, double max_slab);

  NeighborSet neighbors(const LabeledDataset& dataset, const SubTrajRef& window,
                        double eps, int k) const;

 private:
  struct Entry {
    double x;
    double y;
    int traj;
    int start;
  };
  int len_;
  double cell_;
  double max_slab_;
  std::unordered_map<std::uint64_t, std::vector<Entry>> cells_;
};

// Distinct raw trajectories reachable through a neighbor set, split by group.
struct SupportSet {
  std::vector<int> members;  // dense dataset indices, ascending
  int sup_pos = 0;
  int sup_neg = 0;
  int sup_total = 0;
};

SupportSet support_of(const NeighborSet& neighbors, const LabeledDataset& dataset);

// Distance threshold making the median seed support roughly target_support:
// for each seed window the radius reaching its target_support-th closest
// distinct trajectory is computed, and the median radius over seeds is
// returned. Deterministic; O(W^2 * L) over the W length-min_len windows.
double calibrate_epsilon(const LabeledDataset& dataset, int min_len, int k,
                         int target_support);

}  // namespace sdsm
