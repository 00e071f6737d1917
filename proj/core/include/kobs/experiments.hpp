#pragma once

// Ensemble sweeps over (T, V) of total IPC and Krylov observability, their
// persistence, and the run-directory report.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kobs/capacity.hpp"
#include "kobs/grid.hpp"
#include "kobs/krylov.hpp"
#include "kobs/reservoir.hpp"
#include "kobs/timescales.hpp"

namespace kobs {

struct ExperimentConfig {
  ReservoirConfig reservoir;  // clock_cycle, multiplexing and coupling_seed are set per cell
  std::vector<double> t_values{4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
  std::vector<int> v_values{10, 30, 50, 70, 90, 110};
  std::uint64_t base_seed = 0;
  bool seed_set = false;
  int ensemble_size = 10;
  std::uint64_t input_seed = 1;
  CapacityOptions ipc;
  double krylov_tol = kDefaultRankTolerance;
  std::filesystem::path output_dir = "run";
  int workers = 0;  // 0: hardware concurrency

  /// Coupling seeds base_seed, base_seed + 1, ...
  std::vector<std::uint64_t> seeds() const;
  /// washout + train_rows + test_rows.
  std::size_t input_length() const;
  void validate() const;
};

/// Reservoir keys plus t_values, v_values, seed, ensemble_size, input_seed,
/// max_degree, max_delay, train_rows, test_rows, ipc_threshold, surrogates,
/// surrogate_seed, krylov_tol, output_dir and workers.
bool apply_experiment_key(ExperimentConfig& config, const std::string& key, const std::string& value);
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);
std::string format_experiment_config(const ExperimentConfig& config);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct SweepResult {
  std::string metric;
  std::vector<SweepGrid> per_seed;
  SweepGrid mean;
  std::map<std::string, std::vector<SweepGrid>> auxiliary;  // extra per-seed grids
  double seconds = 0.0;
  std::size_t cells = 0;
};

SweepResult sweep_observability(const ExperimentConfig& config);
SweepResult sweep_ipc(const ExperimentConfig& config);

/// Writes <metric>_seed<s>.csv per seed, <metric>_mean.csv, the auxiliary
/// grids and runtime_<metric>.json into `dir`.
void persist_sweep(const SweepResult& result, const std::filesystem::path& dir);

std::vector<HermitianOperator> ensemble_hamiltonians(const ExperimentConfig& config);
std::vector<HermitianOperator> configured_observables(const ExperimentConfig& config);

/// Needs ipc_total_mean.csv and krylov_observability_mean.csv in `dir`;
/// timescales.json and runtime_*.json are folded in when present. Writes
/// summary.json and summary.txt and returns the JSON document.
nlohmann::json report(const std::filesystem::path& dir);

}  // namespace kobs
