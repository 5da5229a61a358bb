#include "sdsm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdsm/errors.hpp"
#include "sdsm/io.hpp"
#include "sdsm/miner.hpp"
#include "sdsm/neighborhood.hpp"
#include "sdsm/permutation.hpp"
#include "sdsm/synth.hpp"

namespace sdsm {

namespace {

struct MiningFlags {
  std::string traj_path;
  std::string labels_path;
  std::string out_dir;
  MiningConfig config;
  bool geojson = false;
};

void add_mining_options(CLI::App* cmd, MiningFlags& f, bool need_out) {
  cmd->add_option("--traj", f.traj_path, "trajectory CSV (traj_id,seq,x,y)")->required();
  cmd->add_option("--labels", f.labels_path, "labels CSV (traj_id,label)")->required();
  cmd->add_option("--eps", f.config.eps, "distance threshold epsilon")->required();
  cmd->add_option("--min-len", f.config.min_len, "minimum sub-trajectory length L");
  cmd->add_option("--top-k", f.config.top_k, "K of the average-top-K-max distance");
  cmd->add_option("--perms", f.config.perms, "number of label permutations B");
  cmd->add_option("--alpha", f.config.alpha, "target significance level");
  cmd->add_option("--seed", f.config.seed, "RNG seed");
  cmd->add_option("--threads", f.config.threads, "worker threads")->envname("SDSM_THREADS");
  auto* out = cmd->add_option("--out", f.out_dir, "output directory");
  if (need_out) out->required();
  cmd->add_flag("--geojson", f.geojson, "also write discoveries.geojson");
}

int k_index_of(const MiningConfig& c) {
  return static_cast<int>(std::ceil(c.alpha * c.perms + 1.0));
}

void print_run_line(const char* mode, const MiningResult& r, const MiningConfig& c,
                    double seconds) {
  std::printf(
      "%s: delta_star=%.6e discoveries=%zu k_index=%d nodes_visited=%llu "
      "chains_pruned=%llu tests_evaluated=%llu wall_time=%.3fs\n",
      mode, r.delta_star, r.discoveries.size(), k_index_of(c),
      static_cast<unsigned long long>(r.diag.nodes_visited),
      static_cast<unsigned long long>(r.diag.chains_pruned),
      static_cast<unsigned long long>(r.diag.tests_evaluated), seconds);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int run_mine(const MiningFlags& f, bool oracle) {
  validate(f.config);
  const LabeledDataset dataset = load_dataset(f.traj_path, f.labels_path);
  const auto start = Clock::now();
  const MiningResult result =
      oracle ? oracle_mine(dataset, f.config) : mine(dataset, f.config);
  const double elapsed = seconds_since(start);
  const RunSummary summary = make_summary(result, dataset, f.config, elapsed);
  write_reports(result, dataset, summary, f.out_dir, f.geojson);
  print_run_line(oracle ? "oracle" : "mine", result, f.config, elapsed);
  return kExitOk;
}

bool same_results(const MiningResult& a, const MiningResult& b, std::string& detail) {
  if (a.delta_star != b.delta_star) {
    detail = "delta_star differs: " + std::to_string(a.delta_star) + " vs " +
             std::to_string(b.delta_star);
    return false;
  }
  if (a.diag.bottom_k_min_p != b.diag.bottom_k_min_p) {
    detail = "bottom-k min-p values differ";
    return false;
  }
  if (a.discoveries.size() != b.discoveries.size()) {
    detail = "discovery counts differ: " + std::to_string(a.discoveries.size()) + " vs " +
             std::to_string(b.discoveries.size());
    return false;
  }
  for (std::size_t i = 0; i < a.discoveries.size(); ++i) {
    if (!(a.discoveries[i] == b.discoveries[i])) {
      detail = "discovery " + std::to_string(i + 1) + " differs";
      return false;
    }
  }
  return true;
}

int run_compare(const MiningFlags& f) {
  validate(f.config);
  const LabeledDataset dataset = load_dataset(f.traj_path, f.labels_path);

  auto t0 = Clock::now();
  const MiningResult pruned = mine(dataset, f.config);
  const double mine_s = seconds_since(t0);
  t0 = Clock::now();
  const MiningResult full = oracle_mine(dataset, f.config);
  const double oracle_s = seconds_since(t0);

  print_run_line("mine", pruned, f.config, mine_s);
  print_run_line("oracle", full, f.config, oracle_s);

  if (!f.out_dir.empty()) {
    write_reports(pruned, dataset, make_summary(pruned, dataset, f.config, mine_s),
                  (std::filesystem::path(f.out_dir) / "mine").string(), f.geojson);
    write_reports(full, dataset, make_summary(full, dataset, f.config, oracle_s),
                  (std::filesystem::path(f.out_dir) / "oracle").string(), f.geojson);
  }

  std::string detail;
  if (!same_results(pruned, full, detail)) {
    std::printf("compare: MISMATCH (%s)\n", detail.c_str());
    return kExitMismatch;
  }
  std::printf("compare: identical (delta_star, bottom-k min-p, %zu discoveries)\n",
              pruned.discoveries.size());
  return kExitOk;
}

struct GenFlags {
  GenConfig config;
  std::string out_dir;
};

void add_gen_options(CLI::App* cmd, GenConfig& g) {
  cmd->add_option("--n-pos", g.n_pos, "positive-group size");
  cmd->add_option("--n-neg", g.n_neg, "negative-group size");
  cmd->add_option("--traj-len", g.traj_len, "points per trajectory");
  cmd->add_option("--step-sigma", g.step_sigma, "random-walk step scale");
  cmd->add_option("--planted-len", g.planted_len, "corridor length (0 = null dataset)");
  cmd->add_option("--planted-frac", g.planted_frac, "fraction of positives carrying the corridor");
  cmd->add_option("--noise-sigma", g.noise_sigma, "per-point jitter of corridor copies");
  cmd->add_option("--seed", g.seed, "RNG seed");
}

int run_gen(const GenFlags& f) {
  const SynthData data = generate(f.config);
  std::error_code ec;
  std::filesystem::create_directories(f.out_dir, ec);
  if (ec) throw IoError(f.out_dir + ": cannot create directory (" + ec.message() + ")");
  const std::filesystem::path dir(f.out_dir);
  write_dataset(data.dataset, (dir / "trajectories.csv").string(),
                (dir / "labels.csv").string());
  write_manifest(data.manifest, (dir / "manifest.csv").string());
  std::printf("gen: n=%d (pos=%d neg=%d) carriers=%zu -> %s\n", data.dataset.size(),
              data.dataset.n_pos(), data.dataset.n_neg(), data.manifest.size(),
              f.out_dir.c_str());
  return kExitOk;
}

struct FwerFlags {
  GenConfig gen;
  MiningConfig config;
  int runs = 100;
  double eps = 0.0;  // 0 = calibrate per dataset
  std::string out_dir;
};

int run_fwer_sim(const FwerFlags& f) {
  if (f.runs < 1) throw ConfigError("fwer-sim: --runs must be >= 1");
  int with_discovery = 0;
  for (int r = 0; r < f.runs; ++r) {
    GenConfig gen_cfg = f.gen;
    gen_cfg.planted_len = 0;  // null datasets by definition
    gen_cfg.seed = f.gen.seed + static_cast<std::uint64_t>(r);
    const SynthData data = generate(gen_cfg);

    MiningConfig run_cfg = f.config;
    run_cfg.seed = f.config.seed + static_cast<std::uint64_t>(r);
    run_cfg.eps = f.eps > 0.0
                      ? f.eps
                      : calibrate_epsilon(data.dataset, run_cfg.min_len, run_cfg.top_k,
                                          std::max(1, data.dataset.size() / 4));
    validate(run_cfg);
    const MiningResult result = mine(data.dataset, run_cfg);
    if (!result.discoveries.empty()) ++with_discovery;
  }
  const double fwer = static_cast<double>(with_discovery) / f.runs;
  std::printf("fwer-sim: runs=%d with_discovery=%d empirical_fwer=%.4f alpha=%.4f\n",
              f.runs, with_discovery, fwer, f.config.alpha);
  if (!f.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(f.out_dir, ec);
    if (ec) throw IoError(f.out_dir + ": cannot create directory (" + ec.message() + ")");
    nlohmann::ordered_json j;
    j["runs"] = f.runs;
    j["runs_with_discovery"] = with_discovery;
    j["empirical_fwer"] = fwer;
    j["alpha"] = f.config.alpha;
    std::ofstream out((std::filesystem::path(f.out_dir) / "fwer.json").string());
    if (!out) throw IoError(f.out_dir + ": cannot write fwer.json");
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  // --mode NAME (or --mode=NAME) in front is accepted as an alias for the
  // NAME subcommand.
  std::vector<std::string> rewritten;
  if (argc >= 2) {
    const std::string first = argv[1];
    if (first == "--mode" && argc >= 3) {
      rewritten.emplace_back(argv[2]);
      for (int i = 3; i < argc; ++i) rewritten.emplace_back(argv[i]);
    } else if (first.rfind("--mode=", 0) == 0) {
      rewritten.emplace_back(first.substr(7));
      for (int i = 2; i < argc; ++i) rewritten.emplace_back(argv[i]);
    }
  }
  if (!rewritten.empty()) return run_cli(rewritten);

  CLI::App app{"sdsm: mine group-discriminative sub-trajectories with FWER control"};
  app.require_subcommand(1);

  MiningFlags mine_flags;
  MiningFlags oracle_flags;
  MiningFlags compare_flags;
  GenFlags gen_flags;
  FwerFlags fwer_flags;

  auto* cmd_mine =
      app.add_subcommand("mine", "pruned mining run (discoveries + run summary)");
  add_mining_options(cmd_mine, mine_flags, /*need_out=*/true);

  auto* cmd_oracle =
      app.add_subcommand("oracle", "unpruned Westfall-Young baseline run");
  add_mining_options(cmd_oracle, oracle_flags, /*need_out=*/true);

  auto* cmd_compare = app.add_subcommand(
      "compare", "run mine and oracle, fail if their results differ");
  add_mining_options(cmd_compare, compare_flags, /*need_out=*/false);

  auto* cmd_gen = app.add_subcommand("gen", "write a synthetic labeled dataset");
  add_gen_options(cmd_gen, gen_flags.config);
  cmd_gen->add_option("--out", gen_flags.out_dir, "output directory")->required();

  auto* cmd_fwer = app.add_subcommand(
      "fwer-sim", "repeated null-dataset runs reporting the empirical FWER");
  add_gen_options(cmd_fwer, fwer_flags.gen);
  cmd_fwer->add_option("--runs", fwer_flags.runs, "number of null datasets");
  cmd_fwer->add_option("--eps", fwer_flags.eps,
                       "distance threshold (omit to calibrate per dataset)");
  cmd_fwer->add_option("--min-len", fwer_flags.config.min_len, "minimum length L");
  cmd_fwer->add_option("--top-k", fwer_flags.config.top_k, "K of the distance");
  cmd_fwer->add_option("--perms", fwer_flags.config.perms, "permutations B");
  cmd_fwer->add_option("--alpha", fwer_flags.config.alpha, "significance level");
  cmd_fwer->add_option("--mine-seed", fwer_flags.config.seed, "base permutation seed");
  cmd_fwer->add_option("--threads", fwer_flags.config.threads, "worker threads")
      ->envname("SDSM_THREADS");
  cmd_fwer->add_option("--out", fwer_flags.out_dir, "directory for fwer.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints message and usage hint
    return kExitUsage;
  }

  try {
    if (cmd_mine->parsed()) return run_mine(mine_flags, /*oracle=*/false);
    if (cmd_oracle->parsed()) return run_mine(oracle_flags, /*oracle=*/true);
    if (cmd_compare->parsed()) return run_compare(compare_flags);
    if (cmd_gen->parsed()) return run_gen(gen_flags);
    if (cmd_fwer->parsed()) return run_fwer_sim(fwer_flags);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sdsm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace sdsm
