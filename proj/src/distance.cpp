#include "sdsm/distance.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsm {

namespace {

// Shared by the batch and incremental paths: given the multiset of the K
// largest values, sum ascending and average. Same multiset in, same bits out.
double average_ascending(std::vector<double>& topk, int k) {
  std::sort(topk.begin(), topk.end());
  double sum = 0.0;
  for (double v : topk) sum += v;
  return sum / static_cast<double>(k);
}

}  // namespace

double avg_top_k_max(std::span<const double> dists, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > dists.size()) {
    throw std::invalid_argument("avg_top_k_max: K must satisfy 1 <= K <= number of distances");
  }
  std::vector<double> all(dists.begin(), dists.end());
  std::nth_element(all.begin(), all.begin() + (all.size() - k), all.end());
  std::vector<double> topk(all.end() - k, all.end());
  return average_ascending(topk, k);
}

TopKState::TopKState(int k) : capacity_(k) {
  if (k < 1) throw std::invalid_argument("TopKState: K must be >= 1");
  kept_.reserve(static_cast<std::size_t>(k));
  sort_scratch_.reserve(static_cast<std::size_t>(k));
}

void TopKState::absorb(double d) {
  ++count_;
  if (static_cast<int>(kept_.size()) < capacity_) {
    kept_.push_back(d);
    std::push_heap(kept_.begin(), kept_.end(), std::greater<>());
    return;
  }
  if (d > kept_.front()) {
    std::pop_heap(kept_.begin(), kept_.end(), std::greater<>());
    kept_.back() = d;
    std::push_heap(kept_.begin(), kept_.end(), std::greater<>());
  }
}

double TopKState::value() const {
  if (count_ < capacity_) {
    throw std::logic_error("TopKState::value: fewer distances absorbed than K");
  }
  sort_scratch_ = kept_;
  return average_ascending(sort_scratch_, capacity_);
}

double TopKState::value_floor() const {
  double largest = 0.0;
  for (double v : kept_) largest = std::max(largest, v);
  return largest / static_cast<double>(capacity_);
}

}  // namespace sdsm
