#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdsm/miner.hpp"
#include "sdsm/synth.hpp"
#include "sdsm/trajectory.hpp"

namespace sdsm {

// Trajectory file: UTF-8 CSV with header "traj_id,seq,x,y"; rows grouped by
// traj_id, seq strictly increasing from 1 within each trajectory.
// Labels file: CSV "traj_id,label" with label in {+1, 1, -1}.
// Every malformed row is reported as IoError with path:line context.
LabeledDataset load_dataset(const std::string& traj_path, const std::string& labels_path);

// Inverse of load_dataset; coordinates are printed with enough digits to
// round-trip exactly.
void write_dataset(const LabeledDataset& dataset, const std::string& traj_path,
                   const std::string& labels_path);

// Manifest of planted corridor windows: CSV "traj_id,start,end".
void write_manifest(const std::vector<CarrierWindow>& manifest, const std::string& path);
std::vector<CarrierWindow> load_manifest(const std::string& path);

// Everything summary.json carries. Field order below is the key order in the
// file.
struct RunSummary {
  double delta_star = 0.0;
  double alpha = 0.0;
  int perms = 0;
  int min_len = 0;
  int top_k = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string rng_name;
  int n = 0;
  int n_pos = 0;
  int n_neg = 0;
  std::uint64_t num_discoveries = 0;
  std::uint64_t nodes_visited = 0;
  std::uint64_t chains_pruned = 0;
  std::uint64_t tests_evaluated = 0;
  std::vector<double> bottom_k_min_p;
  double wall_time_seconds = 0.0;
};

RunSummary make_summary(const MiningResult& result, const LabeledDataset& dataset,
                        const MiningConfig& config, double wall_time_seconds);

// Writes discoveries.tsv and summary.json (and discoveries.geojson when
// with_geojson) under out_dir. discoveries.tsv is a pure function of result
// and dataset: same inputs, same bytes.
void write_reports(const MiningResult& result, const LabeledDataset& dataset,
                   const RunSummary& summary, const std::string& out_dir,
                   bool with_geojson);

}  // namespace sdsm
