#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "sdsm/fisher.hpp"

namespace sdsm {

// B independently shuffled copies of the label vector, stored as one
// positive-membership bitmask per permutation so that counting the positive
// part of a support set is an AND + popcount over a few words.
class PermutationSet {
 public:
  static PermutationSet generate(const std::vector<std::int8_t>& labels, int count,
                                 std::uint64_t seed);

  int count() const { return count_; }
  int n() const { return n_; }
  int words() const { return words_; }
  std::uint64_t seed() const { return seed_; }

  // RNG identifier recorded in run summaries for reproducibility.
  static const char* rng_name();

  int label(int b, int i) const {
    const std::uint64_t w = masks_[static_cast<std::size_t>(b) * words_ + (i >> 6)];
    return (w >> (i & 63)) & 1 ? 1 : -1;
  }

  // |support AND positive group of permutation b|. support_mask has words()
  // words over dense trajectory indices.
  int count_pos(const std::uint64_t* support_mask, int b) const;

  const std::uint64_t* mask(int b) const {
    return masks_.data() + static_cast<std::size_t>(b) * words_;
  }

 private:
  PermutationSet() = default;

  int count_ = 0;
  int n_ = 0;
  int words_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> masks_;  // count_ * words_
};

// Per-permutation running minimum p-values. Entries start at alpha and only
// decrease; updates are atomic minima so chain workers can share the table.
class MinPTable {
 public:
  // Validates alpha < (B - 1) / B so the order-statistic index
  // k = ceil(alpha * B + 1) stays within the table.
  MinPTable(int count, double alpha);

  int count() const { return static_cast<int>(p_min_.size()); }
  double alpha() const { return alpha_; }
  int k_index() const { return k_index_; }

  double value(int b) const { return p_min_[static_cast<std::size_t>(b)].load(std::memory_order_relaxed); }

  void update_min(int b, double p);

  // Current k_index-th smallest entry (1-based order statistic) over a
  // snapshot of the table. Under concurrent updates the snapshot may lag,
  // which can only make the returned threshold larger, never smaller.
  double kth_smallest(std::vector<double>& scratch) const;

  std::vector<double> sorted_values() const;

  // Largest recorded minimum p-value strictly below the k_index-th smallest;
  // 0 when no value lies strictly below (then a run reports no discoveries).
  double delta_star() const;

  // The k_index smallest values, ascending.
  std::vector<double> bottom_k() const;

 private:
  std::vector<std::atomic<double>> p_min_;
  double alpha_;
  int k_index_;
};

// Guarded minimum-p update for one node: for each permutation whose current
// minimum exceeds lower_bound, evaluate the node's p-value under that
// permutation and fold it in. With guard=false every permutation is
// evaluated unconditionally (the plain Westfall-Young baseline). Returns the
// number of test evaluations performed. Skipping a guarded permutation is
// lossless because any p-value of the node is >= lower_bound.
std::uint64_t update_min_p(MinPTable& table, double lower_bound,
                           const std::uint64_t* support_mask, int sup_total,
                           const PermutationSet& perms, const FisherTable& fisher,
                           bool guard);

}  // namespace sdsm
