#pragma once

#include <atomic>
#include <memory>
#include <vector>

namespace sdsm {

// ln k! for k in [0, max_k], accumulated in long double so that ratios of
// binomials stay accurate up to dataset sizes around 10^6.
class LogFactorial {
 public:
  explicit LogFactorial(int max_k);

  long double operator()(int k) const { return table_[static_cast<std::size_t>(k)]; }

  // ln C(n, k); returns -inf for k outside [0, n].
  double log_binomial(int n, int k) const;

 private:
  std::vector<long double> table_;
};

// Upper-left cell and margins of the 2x2 table for one sub-trajectory:
// rows are the group labels, columns are neighbor / non-neighbor counts.
struct ContingencyCounts {
  int sup_pos = 0;    // x
  int sup_total = 0;  // a
  int n_pos = 0;
  int n_neg = 0;
};

// Hypergeometric probabilities, two-sided Fisher's exact test p-values and
// the support-only minimum attainable p-value, all for one fixed pair of
// margins (n_pos, n_neg). Everything is computed in log space.
//
// p-values are memoized per support count a: the first query for a given a
// builds the whole row of p-values over the admissible x range. Rows are
// installed with a CAS, so concurrent queries are safe; a lost race costs
// one redundant row computation.
class FisherTable {
 public:
  FisherTable(int n_pos, int n_neg);
  ~FisherTable();

  FisherTable(const FisherTable&) = delete;
  FisherTable& operator=(const FisherTable&) = delete;

  int n_pos() const { return n_pos_; }
  int n_neg() const { return n_neg_; }
  int n() const { return n_pos_ + n_neg_; }

  // ln P(x | a) under the hypergeometric null. Throws std::invalid_argument
  // outside the admissible range max(0, a - n_neg) <= x <= min(n_pos, a).
  double log_pmf(int x, int a) const;

  // Two-sided Fisher p-value: sum of P(x') over all x' whose probability is
  // <= P(x), with a relative tolerance of 1e-12 on the log-probabilities so
  // the mirror tail of a symmetric table is never lost to rounding.
  // Clamped into (0, 1].
  double two_sided_p(int x, int a) const;

  // Smallest p-value any labeling can produce at support a; depends only on
  // a, so label permutations never change it. Nonincreasing in a up to
  // max(n_pos, n_neg) and constant beyond. In (0, 1].
  double min_attainable_p(int a) const;

  double two_sided_p(const ContingencyCounts& c) const { return two_sided_p(c.sup_pos, c.sup_total); }

 private:
  struct Row {
    int x_min;
    std::vector<double> p;  // indexed x - x_min
  };

  const Row& row_for(int a) const;

  int n_pos_;
  int n_neg_;
  LogFactorial lf_;
  std::vector<double> min_p_;  // per a, precomputed
  mutable std::vector<std::atomic<const Row*>> rows_;
};

// One-off convenience wrappers matching the table methods. Each call builds
// a temporary table; use FisherTable directly in loops.
double hypergeom_log_pmf(int x, int a, int n_pos, int n_neg);
double fisher_two_sided_p(const ContingencyCounts& c);
double p_lower_bound(int a, int n_pos, int n_neg);

}  // namespace sdsm
