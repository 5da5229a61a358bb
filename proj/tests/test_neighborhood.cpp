#include <doctest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "sdsm/neighborhood.hpp"
#include "sdsm/rng.hpp"

using sdsm::epsilon_neighbors;
using sdsm::extend_neighbors;
using sdsm::LabeledDataset;
using sdsm::NeighborSet;
using sdsm::SubTrajRef;
using sdsm::support_of;

namespace {

std::vector<std::pair<int, int>> as_pairs(const NeighborSet& ns) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : ns) out.emplace_back(e.traj, e.start);
  return out;
}

}  // namespace

TEST_SUITE("neighborhood") {

TEST_CASE("worked three-trajectory chain") {
  const LabeledDataset ds = oracles::example_three_walks();
  const double eps = 0.5;
  const int k = 2;

  SubTrajRef node{0, 1, 2};
  NeighborSet ns = epsilon_neighbors(ds, node, eps, k);
  CHECK(as_pairs(ns) == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}});
  CHECK(support_of(ns, ds).sup_total == 2);

  extend_neighbors(ds, node, ns, eps);
  ++node.end;
  CHECK(as_pairs(ns) == std::vector<std::pair<int, int>>{{1, 1}});
  CHECK(support_of(ns, ds).sup_total == 1);

  extend_neighbors(ds, node, ns, eps);
  ++node.end;
  CHECK(ns.empty());
  CHECK(support_of(ns, ds).sup_total == 0);
}

TEST_CASE("zero epsilon keeps only exact duplicates") {
  sdsm::Rng rng(11);
  const LabeledDataset ds = oracles::random_unit_square(rng, 6, 4, 8);
  for (const SubTrajRef& seed : enumerate_seeds(ds, 3)) {
    CHECK(epsilon_neighbors(ds, seed, 0.0, 2).empty());
  }
}

TEST_CASE("another window of the same trajectory counts once in support") {
  // Periodic trajectory: window (1,2) repeats at (3,4).
  sdsm::Trajectory periodic;
  periodic.id = 1;
  periodic.points = {{0, 0}, {1, 0}, {0, 0}, {1, 0}};
  sdsm::Trajectory far;
  far.id = 2;
  far.points = {{50, 50}, {51, 50}, {52, 50}, {53, 50}};
  const LabeledDataset ds({periodic, far}, {1, -1});

  NeighborSet ns = epsilon_neighbors(ds, SubTrajRef{0, 1, 2}, 0.0, 2);
  REQUIRE(as_pairs(ns) == std::vector<std::pair<int, int>>{{0, 3}});
  const auto support = support_of(ns, ds);
  CHECK(support.sup_total == 1);
  CHECK(support.sup_pos == 1);
  CHECK(support.members == std::vector<int>{0});
}

TEST_CASE("chain propagation equals exhaustive recomputation on random data") {
  sdsm::Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_below(12));  // up to 15
    const LabeledDataset ds = oracles::random_unit_square(rng, n, 4, 10);
    const int min_len = 3;
    const int k = 2;
    const double eps = 0.15 + 0.5 * rng.uniform01();

    for (const SubTrajRef& seed : enumerate_seeds(ds, min_len)) {
      SubTrajRef node = seed;
      NeighborSet ns = epsilon_neighbors(ds, node, eps, k);
      const int m = ds.traj(node.traj).size();
      std::size_t previous_size = ns.size() + 1;
      int previous_sup_total = n + 1;
      int previous_sup_pos = n + 1;
      for (;;) {
        const auto expected = oracles::neighbors_brute_force(ds, node, eps, k);
        CHECK(as_pairs(ns) == expected);

        const auto support = support_of(ns, ds);
        const auto expected_support = oracles::support_brute_force(expected, ds);
        CHECK(support.members == expected_support.members);
        CHECK(support.sup_pos == expected_support.sup_pos);
        CHECK(support.sup_total == expected_support.sup_total);
        CHECK(support.sup_pos + support.sup_neg == support.sup_total);

        // Cardinality and per-group support never grow along a chain.
        CHECK(ns.size() < previous_size);
        previous_size = ns.size() + 1;
        CHECK(support.sup_total <= previous_sup_total);
        CHECK(support.sup_pos <= previous_sup_pos);
        previous_sup_total = support.sup_total;
        previous_sup_pos = support.sup_pos;

        if (node.end + 1 > m) break;
        extend_neighbors(ds, node, ns, eps);
        ++node.end;
      }
    }
  }
}

TEST_CASE("calibrated epsilon produces supports near the target") {
  sdsm::Rng rng(606);
  const LabeledDataset ds = oracles::random_unit_square(rng, 12, 6, 10);
  const int target = 3;
  const double eps = sdsm::calibrate_epsilon(ds, 3, 2, target);
  CHECK(eps > 0.0);

  std::vector<int> supports;
  for (const SubTrajRef& seed : enumerate_seeds(ds, 3)) {
    supports.push_back(support_of(epsilon_neighbors(ds, seed, eps, 2), ds).sup_total);
  }
  std::nth_element(supports.begin(), supports.begin() + static_cast<std::ptrdiff_t>(supports.size() / 2),
                   supports.end());
  const int median = supports[supports.size() / 2];
  CHECK(median >= target - 1);
  CHECK(median <= target + 1);
}

TEST_CASE("K larger than the window is rejected") {
  const LabeledDataset ds = oracles::example_three_walks();
  CHECK_THROWS_AS(epsilon_neighbors(ds, SubTrajRef{0, 1, 2}, 0.5, 3), std::invalid_argument);
}

TEST_CASE("slab-indexed scan returns exactly the plain scan") {
  sdsm::Rng rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_below(10));
    const LabeledDataset ds = oracles::random_unit_square(rng, n, 4, 10);
    const int min_len = 3;
    const int k = 1 + static_cast<int>(rng.uniform_below(3));
    const double eps = 0.05 + 0.6 * rng.uniform01();
    const sdsm::SeedIndex index(ds, min_len, eps * k);
    for (const SubTrajRef& seed : enumerate_seeds(ds, min_len)) {
      const NeighborSet via_index = index.neighbors(ds, seed, eps, k);
      const NeighborSet plain = epsilon_neighbors(ds, seed, eps, k);
      CHECK(as_pairs(via_index) == as_pairs(plain));
    }
  }
}

}  // TEST_SUITE
