#include "sdsm/permutation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "sdsm/errors.hpp"
#include "sdsm/rng.hpp"

namespace sdsm {

PermutationSet PermutationSet::generate(const std::vector<std::int8_t>& labels,
                                        int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("permutations: B must be >= 1");
  PermutationSet set;
  set.count_ = count;
  set.n_ = static_cast<int>(labels.size());
  set.words_ = (set.n_ + 63) / 64;
  set.seed_ = seed;
  set.masks_.assign(static_cast<std::size_t>(count) * set.words_, 0);

  Rng rng(seed);
  std::vector<std::int8_t> work(labels);
  for (int b = 0; b < count; ++b) {
    rng.shuffle(work);
    std::uint64_t* mask = set.masks_.data() + static_cast<std::size_t>(b) * set.words_;
    for (int i = 0; i < set.n_; ++i) {
      if (work[static_cast<std::size_t>(i)] > 0) mask[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }
  return set;
}

const char* PermutationSet::rng_name() { return Rng::kName; }

int PermutationSet::count_pos(const std::uint64_t* support_mask, int b) const {
  const std::uint64_t* m = mask(b);
  int total = 0;
  for (int w = 0; w < words_; ++w) {
    total += std::popcount(support_mask[w] & m[w]);
  }
  return total;
}

MinPTable::MinPTable(int count, double alpha) : p_min_(static_cast<std::size_t>(count)), alpha_(alpha) {
  if (count < 1) throw ConfigError("min-p table: B must be >= 1");
  if (!(alpha > 0.0) || !(alpha < (static_cast<double>(count) - 1.0) / count)) {
    throw ConfigError("min-p table: alpha must satisfy 0 < alpha < (B-1)/B");
  }
  k_index_ = static_cast<int>(std::ceil(alpha * count + 1.0));
  if (k_index_ > count) throw ConfigError("min-p table: ceil(alpha*B + 1) exceeds B");
  for (auto& v : p_min_) v.store(alpha, std::memory_order_relaxed);
}

void MinPTable::update_min(int b, double p) {
  std::atomic<double>& slot = p_min_[static_cast<std::size_t>(b)];
  double current = slot.load(std::memory_order_relaxed);
  while (p < current &&
         !slot.compare_exchange_weak(current, p, std::memory_order_relaxed)) {
  }
}

double MinPTable::kth_smallest(std::vector<double>& scratch) const {
  scratch.resize(p_min_.size());
  for (std::size_t i = 0; i < p_min_.size(); ++i) {
    scratch[i] = p_min_[i].load(std::memory_order_relaxed);
  }
  auto nth = scratch.begin() + (k_index_ - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

std::vector<double> MinPTable::sorted_values() const {
  std::vector<double> values(p_min_.size());
  for (std::size_t i = 0; i < p_min_.size(); ++i) {
    values[i] = p_min_[i].load(std::memory_order_relaxed);
  }
  std::sort(values.begin(), values.end());
  return values;
}

double MinPTable::delta_star() const {
  const std::vector<double> sorted = sorted_values();
  const double kth = sorted[static_cast<std::size_t>(k_index_ - 1)];
  double best = 0.0;
  for (double v : sorted) {
    if (v < kth) best = std::max(best, v);
  }
  return best;
}

std::vector<double> MinPTable::bottom_k() const {
  std::vector<double> sorted = sorted_values();
  sorted.resize(static_cast<std::size_t>(k_index_));
  return sorted;
}

std::uint64_t update_min_p(MinPTable& table, double lower_bound,
                           const std::uint64_t* support_mask, int sup_total,
                           const PermutationSet& perms, const FisherTable& fisher,
                           bool guard) {
  std::uint64_t evaluated = 0;
  const int count = perms.count();
  for (int b = 0; b < count; ++b) {
    if (guard && lower_bound >= table.value(b)) continue;
    const int x = perms.count_pos(support_mask, b);
    const double p = fisher.two_sided_p(x, sup_total);
    table.update_min(b, p);
    ++evaluated;
  }
  return evaluated;
}

}  // namespace sdsm
