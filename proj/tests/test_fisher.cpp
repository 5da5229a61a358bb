#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "sdsm/fisher.hpp"
#include "sdsm/rng.hpp"

using sdsm::FisherTable;

TEST_SUITE("fisher") {

TEST_CASE("pmf of the fully split balanced table") {
  FisherTable t(5, 5);
  CHECK(t.log_pmf(5, 5) == doctest::Approx(std::log(1.0 / 252.0)).epsilon(1e-12));
}

TEST_CASE("empty support has a single table") {
  FisherTable t(7, 3);
  CHECK(t.log_pmf(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(t.two_sided_p(0, 0) == 1.0);
  CHECK(t.min_attainable_p(0) == 1.0);
}

TEST_CASE("two-sided p keeps the mirror tail") {
  FisherTable t(5, 5);
  // x=0 and x=5 are exactly tied at 1/252; both must be summed.
  CHECK(t.two_sided_p(5, 5) == doctest::Approx(2.0 / 252.0).epsilon(1e-12));
  CHECK(t.two_sided_p(0, 5) == doctest::Approx(2.0 / 252.0).epsilon(1e-12));
}

TEST_CASE("out-of-range cells are contract violations") {
  FisherTable t(4, 6);
  CHECK_THROWS_AS(t.log_pmf(5, 5), std::invalid_argument);   // x > n_pos
  CHECK_THROWS_AS(t.log_pmf(0, 8), std::invalid_argument);   // x < a - n_neg
  CHECK_THROWS_AS(t.two_sided_p(1, 11), std::invalid_argument);
  CHECK_THROWS_AS(t.min_attainable_p(-1), std::invalid_argument);
}

TEST_CASE("pmf normalizes over the support range") {
  sdsm::Rng rng(31337);
  for (int trial = 0; trial < 40; ++trial) {
    const int n_pos = 1 + static_cast<int>(rng.uniform_below(400));
    const int n_neg = 1 + static_cast<int>(rng.uniform_below(400));
    FisherTable t(n_pos, n_neg);
    const int a = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_pos + n_neg) + 1));
    double total = 0.0;
    for (int x = std::max(0, a - n_neg); x <= std::min(n_pos, a); ++x) {
      total += std::exp(t.log_pmf(x, a));
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("pmf normalizes at large margins") {
  FisherTable t(60000, 40000);
  for (const int a : {1, 17, 900}) {
    double total = 0.0;
    for (int x = std::max(0, a - 40000); x <= std::min(60000, a); ++x) {
      total += std::exp(t.log_pmf(x, a));
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("two-sided p matches direct summation for all tables up to n=40") {
  oracles::ExactTables oracle(40);
  for (int n_pos = 1; n_pos < 40; ++n_pos) {
    for (int n_neg = 1; n_pos + n_neg <= 40; ++n_neg) {
      FisherTable t(n_pos, n_neg);
      for (int a = 0; a <= n_pos + n_neg; ++a) {
        for (int x = std::max(0, a - n_neg); x <= std::min(n_pos, a); ++x) {
          const double expected = static_cast<double>(oracle.two_sided(x, a, n_pos, n_neg));
          const double got = t.two_sided_p(x, a);
          CHECK(std::fabs(got - expected) <= 1e-10 * expected);
        }
      }
    }
  }
}

TEST_CASE("lower bound worked values") {
  CHECK(FisherTable(5, 5).min_attainable_p(5) == doctest::Approx(1.0 / 252.0).epsilon(1e-12));
  CHECK(FisherTable(2, 8).min_attainable_p(5) == doctest::Approx(1.0 / 45.0).epsilon(1e-12));
  // The competing branch of the same table: l(5, 0) = C(8,5)/C(10,5).
  CHECK(1.0 / 45.0 < 56.0 / 252.0);
}

TEST_CASE("lower bound is sound and monotone for all tables up to n=40") {
  for (int n_pos = 1; n_pos < 40; ++n_pos) {
    for (int n_neg = 1; n_pos + n_neg <= 40; ++n_neg) {
      FisherTable t(n_pos, n_neg);
      const int n = n_pos + n_neg;
      double previous = 2.0;
      for (int a = 0; a <= n; ++a) {
        const double bound = t.min_attainable_p(a);
        for (int x = std::max(0, a - n_neg); x <= std::min(n_pos, a); ++x) {
          CHECK(t.two_sided_p(x, a) >= bound);
        }
        if (a <= std::max(n_pos, n_neg)) {
          CHECK(bound <= previous);
        } else {
          CHECK(bound == previous);  // constant past the larger margin
        }
        previous = bound;
      }
    }
  }
}

TEST_CASE("two-sided p is invariant under swapping the groups") {
  sdsm::Rng rng(555);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_pos = 1 + static_cast<int>(rng.uniform_below(30));
    const int n_neg = 1 + static_cast<int>(rng.uniform_below(30));
    const int a = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_pos + n_neg) + 1));
    const int lo = std::max(0, a - n_neg);
    const int hi = std::min(n_pos, a);
    const int x = lo + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
    FisherTable t(n_pos, n_neg);
    FisherTable swapped(n_neg, n_pos);
    CHECK(t.two_sided_p(x, a) == swapped.two_sided_p(a - x, a));
  }
}

TEST_CASE("one-off wrappers agree with the table") {
  CHECK(sdsm::hypergeom_log_pmf(5, 5, 5, 5) == FisherTable(5, 5).log_pmf(5, 5));
  CHECK(sdsm::fisher_two_sided_p({5, 5, 5, 5}) == FisherTable(5, 5).two_sided_p(5, 5));
  CHECK(sdsm::p_lower_bound(5, 2, 8) == FisherTable(2, 8).min_attainable_p(5));
}

}  // TEST_SUITE
