#include "sdsm/synth.hpp"

#include <algorithm>
#include <cmath>

#include "sdsm/errors.hpp"
#include "sdsm/rng.hpp"

namespace sdsm {

SynthData generate(const GenConfig& config) {
  if (config.n_pos < 1 || config.n_neg < 1) throw ConfigError("gen: both groups need >= 1 trajectory");
  if (config.traj_len < 1) throw ConfigError("gen: traj-len must be >= 1");
  if (config.planted_len < 0 || config.planted_len > config.traj_len) {
    throw ConfigError("gen: planted-len must be in [0, traj-len]");
  }
  if (config.planted_frac < 0.0 || config.planted_frac > 1.0) {
    throw ConfigError("gen: planted-frac must be in [0, 1]");
  }
  if (config.noise_sigma < 0.0 || config.step_sigma < 0.0) {
    throw ConfigError("gen: sigmas must be >= 0");
  }

  Rng rng(config.seed);
  const int n = config.n_pos + config.n_neg;
  const double start_sigma =
      config.step_sigma * std::sqrt(static_cast<double>(config.traj_len));

  std::vector<Trajectory> trajs;
  trajs.reserve(static_cast<std::size_t>(n));
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Trajectory t;
    t.id = i + 1;
    t.points.resize(static_cast<std::size_t>(config.traj_len));
    Point pos{start_sigma * rng.gaussian(), start_sigma * rng.gaussian()};
    for (int j = 0; j < config.traj_len; ++j) {
      t.points[static_cast<std::size_t>(j)] = pos;
      pos.x += config.step_sigma * rng.gaussian();
      pos.y += config.step_sigma * rng.gaussian();
    }
    trajs.push_back(std::move(t));
    labels.push_back(i < config.n_pos ? 1 : -1);
  }

  std::vector<CarrierWindow> manifest;
  if (config.planted_len > 0 && config.planted_frac > 0.0) {
    // Corridor template: one more random walk segment, shared by all copies.
    std::vector<Point> corridor(static_cast<std::size_t>(config.planted_len));
    Point pos{start_sigma * rng.gaussian(), start_sigma * rng.gaussian()};
    for (int j = 0; j < config.planted_len; ++j) {
      corridor[static_cast<std::size_t>(j)] = pos;
      pos.x += config.step_sigma * rng.gaussian();
      pos.y += config.step_sigma * rng.gaussian();
    }

    const int carriers =
        static_cast<int>(std::ceil(config.planted_frac * config.n_pos));
    std::vector<int> candidates(static_cast<std::size_t>(config.n_pos));
    for (int i = 0; i < config.n_pos; ++i) candidates[static_cast<std::size_t>(i)] = i;
    rng.shuffle(candidates);
    candidates.resize(static_cast<std::size_t>(std::min(carriers, config.n_pos)));
    std::sort(candidates.begin(), candidates.end());

    const int max_start = config.traj_len - config.planted_len;  // 0-based start
    for (int idx : candidates) {
      const int w = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_start + 1)));
      Trajectory& t = trajs[static_cast<std::size_t>(idx)];
      for (int j = 0; j < config.planted_len; ++j) {
        const Point& c = corridor[static_cast<std::size_t>(j)];
        t.points[static_cast<std::size_t>(w + j)] =
            Point{c.x + config.noise_sigma * rng.gaussian(),
                  c.y + config.noise_sigma * rng.gaussian()};
      }
      manifest.push_back(CarrierWindow{t.id, w + 1, w + config.planted_len});
    }
  }

  return SynthData{LabeledDataset(std::move(trajs), std::move(labels)), std::move(manifest)};
}

}  // namespace sdsm
