#include "sdsm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "sdsm/errors.hpp"

namespace sdsm {

LabeledDataset::LabeledDataset(std::vector<Trajectory> trajectories,
                               std::vector<int> labels) {
  if (trajectories.size() != labels.size()) {
    throw ConfigError("dataset: trajectory/label count mismatch");
  }
  if (trajectories.empty()) {
    throw ConfigError("dataset: empty");
  }

  std::vector<int> order(trajectories.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return trajectories[a].id < trajectories[b].id;
  });

  trajs_.reserve(order.size());
  labels_.reserve(order.size());
  std::unordered_set<int> seen;
  for (int idx : order) {
    Trajectory& t = trajectories[idx];
    if (!seen.insert(t.id).second) {
      throw ConfigError("dataset: duplicate trajectory id " + std::to_string(t.id));
    }
    if (t.points.empty()) {
      throw ConfigError("dataset: trajectory " + std::to_string(t.id) + " has no points");
    }
    for (const Point& p : t.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ConfigError("dataset: non-finite coordinate in trajectory " +
                          std::to_string(t.id));
      }
    }
    const int g = labels[idx];
    if (g != 1 && g != -1) {
      throw ConfigError("dataset: invalid label " + std::to_string(g) +
                        " for trajectory " + std::to_string(t.id));
    }
    (g > 0 ? n_pos_ : n_neg_) += 1;
    labels_.push_back(static_cast<std::int8_t>(g));
    trajs_.push_back(std::move(t));
  }
  if (n_pos_ == 0 || n_neg_ == 0) {
    throw ConfigError("dataset: empty group (need at least one +1 and one -1 label)");
  }
}

int LabeledDataset::index_of_id(int id) const {
  auto it = std::lower_bound(trajs_.begin(), trajs_.end(), id,
                             [](const Trajectory& t, int v) { return t.id < v; });
  if (it == trajs_.end() || it->id != id) return -1;
  return static_cast<int>(it - trajs_.begin());
}

std::vector<SubTrajRef> enumerate_seeds(const LabeledDataset& dataset, int min_len) {
  if (min_len < 2) throw std::invalid_argument("enumerate_seeds: min_len must be >= 2");
  std::vector<SubTrajRef> seeds;
  for (int i = 0; i < dataset.size(); ++i) {
    const int m = dataset.traj(i).size();
    for (int s = 1; s + min_len - 1 <= m; ++s) {
      seeds.push_back(SubTrajRef{i, s, s + min_len - 1});
    }
  }
  return seeds;
}

}  // namespace sdsm
