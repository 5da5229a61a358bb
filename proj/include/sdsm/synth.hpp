#pragma once

#include <cstdint>
#include <vector>

#include "sdsm/trajectory.hpp"

namespace sdsm {

// Synthetic dataset shape. planted_len = 0 gives a pure null dataset: the
// labels are assigned independently of all geometry. planted_len > 0 copies
// one shared corridor template (with per-point Gaussian jitter of scale
// noise_sigma) into a random window of ceil(planted_frac * n_pos) trajectories
// of the positive group.
struct GenConfig {
  int n_pos = 20;
  int n_neg = 20;
  int traj_len = 20;
  double step_sigma = 1.0;
  int planted_len = 0;
  double planted_frac = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

// Ground-truth record of one corridor copy. External trajectory id, 1-based
// inclusive window.
struct CarrierWindow {
  int traj_id = 0;
  int start = 0;
  int end = 0;

  friend bool operator==(const CarrierWindow&, const CarrierWindow&) = default;
};

struct SynthData {
  LabeledDataset dataset;
  std::vector<CarrierWindow> manifest;  // empty for null datasets
};

// Deterministic under seed: same config, same bytes. Trajectories are 2D
// Gaussian random walks with ids 1..n; the first n_pos are labeled +1.
SynthData generate(const GenConfig& config);

}  // namespace sdsm
