#pragma once

#include <cstdint>
#include <vector>

namespace sdsm {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// One moving object: a time-ordered point sequence with an external id.
struct Trajectory {
  int id = 0;
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
};

// Immutable two-group trajectory collection. Trajectories are kept sorted by
// external id; everywhere else they are addressed by their dense index in
// [0, size()). Safe for concurrent reads once constructed.
class LabeledDataset {
 public:
  // Takes trajectories with positionally aligned labels (+1/-1). Validates
  // label domain, id uniqueness, point finiteness and that both groups are
  // non-empty, then sorts by id.
  LabeledDataset(std::vector<Trajectory> trajectories, std::vector<int> labels);

  int size() const { return static_cast<int>(trajs_.size()); }
  int n_pos() const { return n_pos_; }
  int n_neg() const { return n_neg_; }

  const Trajectory& traj(int index) const { return trajs_[index]; }
  int label(int index) const { return labels_[index]; }
  bool is_positive(int index) const { return labels_[index] > 0; }
  int id_of(int index) const { return trajs_[index].id; }

  const std::vector<std::int8_t>& labels() const { return labels_; }

  // Index of the external id, or -1.
  int index_of_id(int id) const;

 private:
  std::vector<Trajectory> trajs_;
  std::vector<std::int8_t> labels_;
  int n_pos_ = 0;
  int n_neg_ = 0;
};

// A window of one trajectory. `traj` is the dense dataset index; `start` and
// `end` are 1-based inclusive point indices (1 <= start < end <= m).
struct SubTrajRef {
  int traj = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  friend bool operator==(const SubTrajRef&, const SubTrajRef&) = default;
  friend auto operator<=>(const SubTrajRef&, const SubTrajRef&) = default;
};

// All length-`min_len` windows, ascending (traj, start). Trajectories shorter
// than min_len contribute nothing. min_len >= 2.
std::vector<SubTrajRef> enumerate_seeds(const LabeledDataset& dataset, int min_len);

}  // namespace sdsm
