#include "sdsm/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sdsm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Floor for exponentiated probabilities so results stay inside (0, 1] even
// when the true value underflows double range.
constexpr double kTinyP = std::numeric_limits<double>::min();

double clamp_p(double p) { return std::min(1.0, std::max(p, kTinyP)); }

void check_range(int x, int a, int n_pos, int n_neg) {
  const int lo = std::max(0, a - n_neg);
  const int hi = std::min(n_pos, a);
  if (a < 0 || a > n_pos + n_neg || x < lo || x > hi) {
    throw std::invalid_argument("fisher: cell x=" + std::to_string(x) +
                                " outside admissible range for a=" + std::to_string(a));
  }
}

}  // namespace

LogFactorial::LogFactorial(int max_k) {
  table_.resize(static_cast<std::size_t>(std::max(max_k, 1)) + 1);
  table_[0] = 0.0L;
  long double sum = 0.0L;
  long double carry = 0.0L;  // Kahan compensation
  for (std::size_t k = 1; k < table_.size(); ++k) {
    const long double term = std::log(static_cast<long double>(k)) - carry;
    const long double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
    table_[k] = sum;
  }
}

double LogFactorial::log_binomial(int n, int k) const {
  if (k < 0 || k > n) return kNegInf;
  return static_cast<double>((*this)(n) - (*this)(k) - (*this)(n - k));
}

FisherTable::FisherTable(int n_pos, int n_neg)
    : n_pos_(n_pos), n_neg_(n_neg), lf_(n_pos + n_neg), rows_(static_cast<std::size_t>(n_pos + n_neg) + 1) {
  if (n_pos < 1 || n_neg < 1) {
    throw std::invalid_argument("FisherTable: both group sizes must be >= 1");
  }
  for (auto& r : rows_) r.store(nullptr, std::memory_order_relaxed);

  // Minimum attainable p at support a (the l(a, b) extremes). The candidate
  // tables are x = a (all support positive) and x = 0 (all negative), each
  // clamped at its group size.
  const int n_all = n();
  min_p_.resize(static_cast<std::size_t>(n_all) + 1);
  for (int a = 0; a <= n_all; ++a) {
    const auto l = [&](int aa, int b) {
      return lf_.log_binomial(n_pos_, b) + lf_.log_binomial(n_neg_, aa - b) -
             lf_.log_binomial(n_all, aa);
    };
    const double upper = (a <= n_pos_) ? l(a, a) : l(n_pos_, n_pos_);
    const double lower = (a <= n_neg_) ? l(a, 0) : l(n_neg_, 0);
    min_p_[static_cast<std::size_t>(a)] = clamp_p(std::exp(std::min(upper, lower)));
  }
}

FisherTable::~FisherTable() {
  for (auto& r : rows_) delete r.load(std::memory_order_relaxed);
}

double FisherTable::log_pmf(int x, int a) const {
  check_range(x, a, n_pos_, n_neg_);
  return lf_.log_binomial(n_pos_, x) + lf_.log_binomial(n_neg_, a - x) -
         lf_.log_binomial(n(), a);
}

const FisherTable::Row& FisherTable::row_for(int a) const {
  std::atomic<const Row*>& slot = rows_[static_cast<std::size_t>(a)];
  if (const Row* existing = slot.load(std::memory_order_acquire)) return *existing;

  const int x_min = std::max(0, a - n_neg_);
  const int x_max = std::min(n_pos_, a);
  const int count = x_max - x_min + 1;

  std::vector<double> lp(static_cast<std::size_t>(count));
  for (int x = x_min; x <= x_max; ++x) {
    lp[static_cast<std::size_t>(x - x_min)] = log_pmf(x, a);
  }

  // Accumulate point probabilities from the least likely table upward, then
  // serve each p-value by prefix: everything at most as likely as the
  // observed table, with a small log-space tolerance so exact mirror tables
  // always land on the same side.
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (lp[static_cast<std::size_t>(i)] != lp[static_cast<std::size_t>(j)]) {
      return lp[static_cast<std::size_t>(i)] < lp[static_cast<std::size_t>(j)];
    }
    return i < j;
  });
  std::vector<double> sorted_lp(static_cast<std::size_t>(count));
  std::vector<double> prefix(static_cast<std::size_t>(count));
  double running = 0.0;
  for (int r = 0; r < count; ++r) {
    const double v = lp[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
    sorted_lp[static_cast<std::size_t>(r)] = v;
    running += std::exp(v);
    prefix[static_cast<std::size_t>(r)] = running;
  }

  auto row = std::make_unique<Row>();
  row->x_min = x_min;
  row->p.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double lpx = lp[static_cast<std::size_t>(i)];
    const double tol = 1e-12 * std::max(1.0, std::fabs(lpx));
    const auto it = std::upper_bound(sorted_lp.begin(), sorted_lp.end(), lpx + tol);
    const std::size_t last = static_cast<std::size_t>(it - sorted_lp.begin());
    row->p[static_cast<std::size_t>(i)] = clamp_p(prefix[last - 1]);
  }

  const Row* expected = nullptr;
  const Row* fresh = row.get();
  if (slot.compare_exchange_strong(expected, fresh, std::memory_order_release,
                                   std::memory_order_acquire)) {
    row.release();
    return *fresh;
  }
  return *expected;  // another thread won the race; our row is discarded
}

double FisherTable::two_sided_p(int x, int a) const {
  check_range(x, a, n_pos_, n_neg_);
  const Row& row = row_for(a);
  return row.p[static_cast<std::size_t>(x - row.x_min)];
}

double FisherTable::min_attainable_p(int a) const {
  if (a < 0 || a > n()) {
    throw std::invalid_argument("fisher: support a=" + std::to_string(a) + " out of range");
  }
  return min_p_[static_cast<std::size_t>(a)];
}

double hypergeom_log_pmf(int x, int a, int n_pos, int n_neg) {
  return FisherTable(n_pos, n_neg).log_pmf(x, a);
}

double fisher_two_sided_p(const ContingencyCounts& c) {
  return FisherTable(c.n_pos, c.n_neg).two_sided_p(c.sup_pos, c.sup_total);
}

double p_lower_bound(int a, int n_pos, int n_neg) {
  return FisherTable(n_pos, n_neg).min_attainable_p(a);
}

}  // namespace sdsm
