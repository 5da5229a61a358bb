#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "sdsm/trajectory.hpp"

namespace sdsm {

inline double pointwise_distance(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Mean of the K largest values of `dists`. Requires 1 <= K <= dists.size().
// The K selected values are summed in ascending order; TopKState::value()
// uses the same order, so incremental and batch results are bit-identical.
double avg_top_k_max(std::span<const double> dists, int k);

// Running "K largest pointwise distances" of a window pair, grown one point
// at a time as the pair is extended. Kept values live in a size-K min-heap;
// the smallest kept value is displaced when a larger distance arrives.
class TopKState {
 public:
  explicit TopKState(int k);

  void absorb(double d);

  // Forget all absorbed distances; capacity is kept.
  void reset() {
    kept_.clear();
    count_ = 0;
  }

  int capacity() const { return capacity_; }
  int count() const { return count_; }

  // Current distance, sum(kept ascending) / K. Requires count() >= capacity().
  double value() const;

  // Lower bound on value() that is valid as soon as any distance was
  // absorbed: max kept value / K (cheap early-out while scanning).
  double value_floor() const;

  const std::vector<double>& kept() const { return kept_; }

 private:
  int capacity_;
  int count_ = 0;
  std::vector<double> kept_;                 // min-heap, size <= capacity_
  mutable std::vector<double> sort_scratch_;  // reused by value(); no per-read allocation
};

// Value-style single-step extension of the incremental state.
inline TopKState extend_topk(TopKState state, double d) {
  state.absorb(d);
  return state;
}

}  // namespace sdsm
