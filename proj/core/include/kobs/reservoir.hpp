#pragma once

// Ising quantum reservoir: input injection at site 1, clock-cycle evolution,
// time-multiplexed measurements, additive Gaussian noise and a least-squares
// linear readout.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kobs/quantum.hpp"

namespace kobs {

struct ReservoirConfig {
  int n_sites = 4;
  double field_h = 0.5;
  std::uint64_t coupling_seed = 0;
  double clock_cycle = 1.0;
  int multiplexing = 1;
  std::vector<std::string> observables{"Z_1"};
  double noise_eta = 1e-4;
  std::uint64_t noise_seed = 0;
  int washout = 200;

  /// Throws std::invalid_argument on T <= 0, V < 1, eta < 0, washout < 0,
  /// n_sites < 1 or an empty observable list.
  void validate() const;
};

inline constexpr int kConfigSchemaVersion = 1;

/// Reads `key = value` lines; '#' starts a comment. A `schema_version` key,
/// when present, must equal kConfigSchemaVersion. Unknown keys are errors.
/// Lists (observables) are comma separated.
ReservoirConfig parse_reservoir_config(const std::string& text);
ReservoirConfig read_reservoir_config(const std::filesystem::path& path);
std::string format_reservoir_config(const ReservoirConfig& config);

/// Applies one `key = value` assignment; returns false if the key is not a
/// reservoir key.
bool apply_reservoir_key(ReservoirConfig& config, const std::string& key, const std::string& value);

struct StateMatrix {
  RealMatrix values;                // N_U x N_R
  std::vector<std::string> labels;  // "Z_1@3": observable, multiplex index j (1-based)

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

struct RunOptions {
  const DensityMatrix* initial_state = nullptr;  // default I / 2^n
  bool validate_states = false;                   // check every rho_n (trace, positivity >= -1e-9)
};

/// Builds the Hamiltonian from the config.
StateMatrix run_reservoir(const ReservoirConfig& config, std::span<const double> inputs, const RunOptions& options = {});

/// Uses a prebuilt propagator of the config's Hamiltonian.
StateMatrix run_reservoir(const Propagator& propagator, const ReservoirConfig& config, std::span<const double> inputs,
                          const RunOptions& options = {});

struct ReadoutWeights {
  RealMatrix weights;  // N_R x m
  double training_residual = 0.0;  // mean squared error over all entries
};

/// Moore-Penrose pseudo-inverse; singular values below 1e-12 sigma_max count
/// as zero.
RealMatrix pseudo_inverse(const RealMatrix& a);

ReadoutWeights train_readout(const RealMatrix& s_train, const RealMatrix& targets);
RealMatrix predict(const RealMatrix& s, const ReadoutWeights& w);

/// i.i.d. uniform on [-1, 1] from the top 53 bits of mt19937_64 outputs.
std::vector<double> draw_inputs(std::size_t count, std::uint64_t seed);

void write_state_csv(const StateMatrix& s, const std::filesystem::path& path);
StateMatrix read_state_csv(const std::filesystem::path& path);

/// Row-major little-endian doubles at `path`, metadata at `path` + ".json".
void write_state_binary(const StateMatrix& s, const std::filesystem::path& path, const nlohmann::json& extra = {});
StateMatrix read_state_binary(const std::filesystem::path& path);

}  // namespace kobs
