#include "sdsm/neighborhood.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsm {

namespace {

// Absorbs the pointwise distances of an index-aligned window pair into the
// caller's scratch TopKState, bailing out as soon as the pair provably
// exceeds eps. Returns true with the complete state iff the pair is within
// eps. The scratch is reset on entry, never reallocated.
bool pair_within_eps(const Trajectory& a, int sa, const Trajectory& b, int sb,
                     int len, int k, double eps, TopKState& scratch) {
  const double single_cap = eps * static_cast<double>(k);  // dist_K >= d_max / K
  const double cap_sq = single_cap * single_cap;
  scratch.reset();
  for (int t = 0; t < len; ++t) {
    const Point& p = a.points[static_cast<std::size_t>(sa - 1 + t)];
    const Point& q = b.points[static_cast<std::size_t>(sb - 1 + t)];
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double d_sq = dx * dx + dy * dy;
    if (d_sq > cap_sq) return false;
    scratch.absorb(std::sqrt(d_sq));
    if (scratch.count() >= k && scratch.value() > eps) return false;
  }
  return scratch.value() <= eps;
}

}  // namespace

NeighborSet epsilon_neighbors(const LabeledDataset& dataset, const SubTrajRef& window,
                              double eps, int k) {
  const int len = window.length();
  if (k < 1 || k > len) {
    throw std::invalid_argument("epsilon_neighbors: K must satisfy 1 <= K <= window length");
  }
  const Trajectory& own = dataset.traj(window.traj);
  NeighborSet result;
  TopKState scratch(k);
  for (int j = 0; j < dataset.size(); ++j) {
    const Trajectory& other = dataset.traj(j);
    const int last_start = other.size() - len + 1;
    for (int s = 1; s <= last_start; ++s) {
      if (j == window.traj && s == window.start) continue;  // self window only
      if (pair_within_eps(own, window.start, other, s, len, k, eps, scratch)) {
        result.push_back(NeighborEntry{j, s, scratch});
      }
    }
  }
  return result;
}

void extend_neighbors(const LabeledDataset& dataset, const SubTrajRef& node,
                      NeighborSet& neighbors, double eps) {
  const Trajectory& own = dataset.traj(node.traj);
  if (node.end + 1 > own.size()) {
    throw std::invalid_argument("extend_neighbors: node extension does not exist");
  }
  const Point& p_new = own.points[static_cast<std::size_t>(node.end)];  // index end+1, 1-based
  const int len = node.length();
  std::size_t kept = 0;
  for (NeighborEntry& entry : neighbors) {
    const Trajectory& other = dataset.traj(entry.traj);
    const int neighbor_next = entry.start + len;  // 1-based index of its new point
    if (neighbor_next > other.size()) continue;
    entry.topk.absorb(pointwise_distance(p_new, other.points[static_cast<std::size_t>(neighbor_next - 1)]));
    if (entry.topk.value() <= eps) {
      if (&neighbors[kept] != &entry) neighbors[kept] = std::move(entry);
      ++kept;
    }
  }
  neighbors.erase(neighbors.begin() + static_cast<std::ptrdiff_t>(kept), neighbors.end());
}

namespace {

std::int64_t cell_coord(double v, double cell) {
  return static_cast<std::int64_t>(std::floor(v / cell));
}

std::uint64_t cell_key(std::int64_t ix, std::int64_t iy) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
}

}  // namespace

SeedIndex::SeedIndex(const LabeledDataset& dataset, int len, double max_slab)
    : len_(len), cell_(max_slab > 0.0 ? max_slab : 1.0), max_slab_(max_slab) {
  for (int j = 0; j < dataset.size(); ++j) {
    const Trajectory& t = dataset.traj(j);
    for (int s = 1; s + len - 1 <= t.size(); ++s) {
      const Point& first = t.points[static_cast<std::size_t>(s - 1)];
      cells_[cell_key(cell_coord(first.x, cell_), cell_coord(first.y, cell_))].push_back(
          Entry{first.x, first.y, j, s});
    }
  }
}

NeighborSet SeedIndex::neighbors(const LabeledDataset& dataset, const SubTrajRef& window,
                                 double eps, int k) const {
  if (window.length() != len_) {
    throw std::invalid_argument("SeedIndex: window length does not match the index");
  }
  if (k < 1 || k > len_) {
    throw std::invalid_argument("SeedIndex: K must satisfy 1 <= K <= window length");
  }
  const double slab = eps * static_cast<double>(k);
  if (slab > max_slab_) {
    throw std::invalid_argument("SeedIndex: k*eps exceeds the slab the index was built for");
  }
  const Trajectory& own = dataset.traj(window.traj);
  const Point& first = own.points[static_cast<std::size_t>(window.start - 1)];

  NeighborSet result;
  TopKState scratch(k);
  const std::int64_t ix = cell_coord(first.x, cell_);
  const std::int64_t iy = cell_coord(first.y, cell_);
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      const auto it = cells_.find(cell_key(ix + dx, iy + dy));
      if (it == cells_.end()) continue;
      for (const Entry& e : it->second) {
        // First-point distance above K*eps rules the pair out entirely.
        if (std::fabs(e.x - first.x) > slab || std::fabs(e.y - first.y) > slab) continue;
        if (e.traj == window.traj && e.start == window.start) continue;
        if (pair_within_eps(own, window.start, dataset.traj(e.traj), e.start, len_, k,
                            eps, scratch)) {
          result.push_back(NeighborEntry{e.traj, e.start, scratch});
        }
      }
    }
  }
  std::sort(result.begin(), result.end(), [](const NeighborEntry& a, const NeighborEntry& b) {
    return a.traj != b.traj ? a.traj < b.traj : a.start < b.start;
  });
  return result;
}

SupportSet support_of(const NeighborSet& neighbors, const LabeledDataset& dataset) {
  SupportSet s;
  s.members.reserve(neighbors.size());
  int prev = -1;
  for (const NeighborEntry& e : neighbors) {  // ordered by (traj, start)
    if (e.traj != prev) {
      s.members.push_back(e.traj);
      prev = e.traj;
    }
  }
  for (int idx : s.members) {
    (dataset.is_positive(idx) ? s.sup_pos : s.sup_neg) += 1;
  }
  s.sup_total = static_cast<int>(s.members.size());
  return s;
}

double calibrate_epsilon(const LabeledDataset& dataset, int min_len, int k,
                         int target_support) {
  if (target_support < 1) throw std::invalid_argument("calibrate_epsilon: target_support >= 1");
  const std::vector<SubTrajRef> seeds = enumerate_seeds(dataset, min_len);
  std::vector<double> radii;
  std::vector<double> best;  // per other trajectory, min window distance
  TopKState scratch(k);
  for (const SubTrajRef& seed : seeds) {
    best.assign(static_cast<std::size_t>(dataset.size()), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(dataset.size()), false);
    const Trajectory& own = dataset.traj(seed.traj);
    for (int j = 0; j < dataset.size(); ++j) {
      const Trajectory& other = dataset.traj(j);
      const int last_start = other.size() - min_len + 1;
      for (int s = 1; s <= last_start; ++s) {
        if (j == seed.traj && s == seed.start) continue;
        scratch.reset();
        for (int t = 0; t < min_len; ++t) {
          scratch.absorb(pointwise_distance(
              own.points[static_cast<std::size_t>(seed.start - 1 + t)],
              other.points[static_cast<std::size_t>(s - 1 + t)]));
        }
        const double d = scratch.value();
        if (!seen[static_cast<std::size_t>(j)] || d < best[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = true;
          best[static_cast<std::size_t>(j)] = d;
        }
      }
    }
    std::vector<double> reachable;
    for (int j = 0; j < dataset.size(); ++j) {
      if (seen[static_cast<std::size_t>(j)]) reachable.push_back(best[static_cast<std::size_t>(j)]);
    }
    if (static_cast<int>(reachable.size()) < target_support) continue;
    std::nth_element(reachable.begin(), reachable.begin() + (target_support - 1), reachable.end());
    radii.push_back(reachable[static_cast<std::size_t>(target_support - 1)]);
  }
  if (radii.empty()) {
    throw std::invalid_argument("calibrate_epsilon: no seed can reach the requested support");
  }
  const std::size_t mid = radii.size() / 2;
  std::nth_element(radii.begin(), radii.begin() + static_cast<std::ptrdiff_t>(mid), radii.end());
  return radii[mid];
}

}  // namespace sdsm
