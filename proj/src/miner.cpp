#include "sdsm/miner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "sdsm/errors.hpp"
#include "sdsm/fisher.hpp"
#include "sdsm/neighborhood.hpp"
#include "sdsm/permutation.hpp"

namespace sdsm {

void validate(const MiningConfig& config) {
  if (!(config.eps >= 0.0)) throw ConfigError("eps must be >= 0");
  if (config.min_len < 2) throw ConfigError("min-len (L) must be >= 2");
  if (config.top_k < 1) throw ConfigError("top-k (K) must be >= 1");
  if (config.top_k > config.min_len) {
    throw ConfigError("top-k (K) must be no greater than min-len (L)");
  }
  if (config.perms < 1) throw ConfigError("perms (B) must be >= 1");
  const double cap = (static_cast<double>(config.perms) - 1.0) / config.perms;
  if (!(config.alpha > 0.0) || !(config.alpha < cap)) {
    throw ConfigError("alpha must satisfy 0 < alpha < (B-1)/B");
  }
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
}

double adjusted_p(double p, double alpha, double delta_star) {
  if (!(delta_star > 0.0)) throw std::invalid_argument("adjusted_p: delta_star must be > 0");
  if (!(p < delta_star)) throw std::invalid_argument("adjusted_p: p must be < delta_star");
  return p * (alpha / delta_star);
}

namespace {

struct SupportMask {
  std::vector<std::uint64_t> words;

  explicit SupportMask(int word_count) : words(static_cast<std::size_t>(word_count), 0) {}

  void rebuild(const NeighborSet& neighbors) {
    std::fill(words.begin(), words.end(), 0);
    for (const NeighborEntry& e : neighbors) {
      words[static_cast<std::size_t>(e.traj >> 6)] |= std::uint64_t{1} << (e.traj & 63);
    }
  }

  int popcount() const {
    int total = 0;
    for (std::uint64_t w : words) total += std::popcount(w);
    return total;
  }

  int intersect_count(const std::uint64_t* other) const {
    int total = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      total += std::popcount(words[i] & other[i]);
    }
    return total;
  }
};

// Dispatches seed indices to `threads` workers. make_worker(t) returns the
// per-seed callable for worker t; per-worker scratch lives in the closure.
template <typename MakeWorker>
void for_each_seed(std::size_t seed_count, int threads, MakeWorker&& make_worker) {
  std::atomic<std::size_t> next{0};
  auto drain = [&](auto&& work) {
    for (;;) {
      const std::size_t idx = next.fetch_add(1, std::memory_order_relaxed);
      if (idx >= seed_count) break;
      work(idx);
    }
  };
  if (threads <= 1) {
    drain(make_worker(0));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] { drain(make_worker(t)); });
  }
  for (std::thread& th : pool) th.join();
}

struct RunContext {
  const LabeledDataset& dataset;
  const MiningConfig& config;
  FisherTable fisher;
  PermutationSet perms;
  std::vector<std::uint64_t> true_pos_mask;
  std::vector<SubTrajRef> seeds;
  SeedIndex index;

  RunContext(const LabeledDataset& ds, const MiningConfig& cfg)
      : dataset(ds),
        config(cfg),
        fisher(ds.n_pos(), ds.n_neg()),
        perms(PermutationSet::generate(ds.labels(), cfg.perms, cfg.seed)),
        true_pos_mask(static_cast<std::size_t>((ds.size() + 63) / 64), 0),
        seeds(enumerate_seeds(ds, cfg.min_len)),
        index(ds, cfg.min_len, cfg.eps * cfg.top_k) {
    for (int i = 0; i < ds.size(); ++i) {
      if (ds.is_positive(i)) {
        true_pos_mask[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63);
      }
    }
  }
};

// Null-distribution estimation: walks every chain, folding each node's
// permutation p-values into the shared min-p table. With pruning enabled a
// chain is abandoned once the node's minimum attainable p-value exceeds the
// current k-th smallest minimum (strictly; equal-to-threshold nodes are
// still processed, which keeps the pruned run's bottom-of-table values
// exactly equal to the unpruned run's even when order statistics tie).
void estimation_phase(RunContext& ctx, MinPTable& table, bool prune, Diagnostics& diag,
                      const NodeObserver& observer) {
  const int threads = observer ? 1 : ctx.config.threads;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> pruned_chains{0};
  std::atomic<std::uint64_t> tests{0};

  for_each_seed(ctx.seeds.size(), threads, [&](int) {
    return [&, mask = SupportMask((ctx.dataset.size() + 63) / 64),
            scratch = std::vector<double>()](std::size_t seed_idx) mutable {
      SubTrajRef node = ctx.seeds[seed_idx];
      NeighborSet neighbors =
          ctx.index.neighbors(ctx.dataset, node, ctx.config.eps, ctx.config.top_k);
      const int m = ctx.dataset.traj(node.traj).size();
      for (;;) {
        nodes.fetch_add(1, std::memory_order_relaxed);
        mask.rebuild(neighbors);
        const int sup_total = mask.popcount();
        const double lower_bound = ctx.fisher.min_attainable_p(sup_total);
        bool cut = false;
        if (prune) {
          const double threshold = table.kth_smallest(scratch);
          cut = lower_bound > threshold;
        }
        if (observer) {
          NodeVisit visit;
          visit.ref = node;
          visit.sup_total = sup_total;
          visit.sup_pos = mask.intersect_count(ctx.true_pos_mask.data());
          visit.lower_bound = lower_bound;
          visit.pruned = cut;
          visit.members = support_of(neighbors, ctx.dataset).members;
          observer(visit);
        }
        if (cut) {
          pruned_chains.fetch_add(1, std::memory_order_relaxed);
          return;
        }
        tests.fetch_add(update_min_p(table, lower_bound, mask.words.data(), sup_total,
                                     ctx.perms, ctx.fisher, /*guard=*/prune),
                        std::memory_order_relaxed);
        if (node.end + 1 > m) return;
        extend_neighbors(ctx.dataset, node, neighbors, ctx.config.eps);
        ++node.end;
      }
    };
  });

  diag.nodes_visited = nodes.load();
  diag.chains_pruned = pruned_chains.load();
  diag.tests_evaluated = tests.load();
}

// Discovery enumeration under the true labels with delta* fixed. Re-walks
// the chains instead of caching estimation-phase state; the Fisher row memo
// makes the re-evaluation cheap. Pruning here uses lower_bound >= delta*,
// which is final (no descendant can reach p < delta* once its bound is
// there).
std::vector<DiscoveryRecord> discovery_phase(RunContext& ctx, double delta_star, bool prune) {
  std::vector<std::vector<DiscoveryRecord>> found(
      static_cast<std::size_t>(std::max(1, ctx.config.threads)));

  for_each_seed(ctx.seeds.size(), ctx.config.threads, [&](int t) {
    return [&, t, mask = SupportMask((ctx.dataset.size() + 63) / 64)](std::size_t seed_idx) mutable {
      SubTrajRef node = ctx.seeds[seed_idx];
      NeighborSet neighbors =
          ctx.index.neighbors(ctx.dataset, node, ctx.config.eps, ctx.config.top_k);
      const int m = ctx.dataset.traj(node.traj).size();
      for (;;) {
        mask.rebuild(neighbors);
        const int sup_total = mask.popcount();
        if (prune && ctx.fisher.min_attainable_p(sup_total) >= delta_star) return;
        const int sup_pos = mask.intersect_count(ctx.true_pos_mask.data());
        const double p = ctx.fisher.two_sided_p(sup_pos, sup_total);
        if (p < delta_star) {
          DiscoveryRecord rec;
          rec.ref = node;
          rec.sup_pos = sup_pos;
          rec.sup_neg = sup_total - sup_pos;
          rec.sup_total = sup_total;
          rec.p_value = p;
          rec.adjusted_p = adjusted_p(p, ctx.config.alpha, delta_star);
          found[static_cast<std::size_t>(t)].push_back(rec);
        }
        if (node.end + 1 > m) return;
        extend_neighbors(ctx.dataset, node, neighbors, ctx.config.eps);
        ++node.end;
      }
    };
  });

  std::vector<DiscoveryRecord> all;
  for (auto& part : found) {
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end(), [](const DiscoveryRecord& a, const DiscoveryRecord& b) {
    return std::tie(a.p_value, a.ref.traj, a.ref.start, a.ref.end) <
           std::tie(b.p_value, b.ref.traj, b.ref.start, b.ref.end);
  });
  return all;
}

MiningResult run(const LabeledDataset& dataset, const MiningConfig& config, bool prune,
                 const NodeObserver& observer) {
  validate(config);
  RunContext ctx(dataset, config);
  MinPTable table(config.perms, config.alpha);

  MiningResult result;
  estimation_phase(ctx, table, prune, result.diag, observer);
  result.delta_star = table.delta_star();
  result.diag.bottom_k_min_p = table.bottom_k();
  if (result.delta_star > 0.0) {
    result.discoveries = discovery_phase(ctx, result.delta_star, prune);
  }
  return result;
}

}  // namespace

MiningResult mine(const LabeledDataset& dataset, const MiningConfig& config,
                  const NodeObserver& observer) {
  return run(dataset, config, /*prune=*/true, observer);
}

MiningResult oracle_mine(const LabeledDataset& dataset, const MiningConfig& config,
                         const NodeObserver& observer) {
  return run(dataset, config, /*prune=*/false, observer);
}

}  // namespace sdsm
