#pragma once

// Information processing capacity: products of Legendre polynomials of
// delayed inputs as targets, held-out squared correlation as the capacity of
// each target, and the thresholded sum over a truncated target set.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kobs/quantum.hpp"

namespace kobs {

/// P_k(x) by the three-term recurrence.
double legendre(int k, double x);

struct TargetTerm {
  int delay = 0;   // d >= 0
  int degree = 1;  // k >= 1
  bool operator==(const TargetTerm&) const = default;
};

/// prod_i P_{k_i}(u_{n - d_i}); terms sorted by ascending, pairwise distinct delay.
struct TargetSpec {
  std::vector<TargetTerm> terms;

  int total_degree() const;
  int max_delay() const;
  std::string to_string() const;  // e.g. "1^1*3^2" (delay^degree)
  /// Throws std::invalid_argument unless delays are distinct and >= 0, and degrees >= 1.
  void validate() const;
  bool operator==(const TargetSpec&) const = default;
};

/// All specs with total degree <= max_degree and delays in 0..max_delay,
/// ordered by total degree, then delays, then degrees (lexicographic).
/// Throws std::length_error if more than `cap` specs would be produced.
std::vector<TargetSpec> enumerate_targets(int max_degree, int max_delay, std::size_t cap = 1'000'000);

/// Element r is prod_i P_{k_i}(inputs[first + r - d_i]) for r in [0, rows).
RealVector build_target(std::span<const double> inputs, const TargetSpec& spec, std::size_t first, std::size_t rows);

/// Trains a readout on the training split (features and target centered on
/// their training means) and returns the squared Pearson correlation of its
/// held-out prediction with z_test, clamped to [0, 1]. Zero if z_test or the
/// prediction has zero variance.
double capacity_of_target(const RealMatrix& s_train, const RealMatrix& s_test, const RealVector& z_train,
                          const RealVector& z_test);

/// capacity_of_target for many targets against one pair of splits; the
/// readout pseudo-inverse is computed once.
class CapacityEvaluator {
 public:
  CapacityEvaluator(const RealMatrix& s_train, const RealMatrix& s_test);

  /// Columns of z_train / z_test are targets.
  RealVector capacities(const RealMatrix& z_train, const RealMatrix& z_test) const;

  Eigen::Index train_rows() const { return pinv_.cols(); }
  Eigen::Index test_rows() const { return s_test_.rows(); }

 private:
  RealMatrix pinv_;    // of the centered training features
  RealMatrix s_test_;  // centered by training means
};

struct CapacityOptions {
  int max_degree = 3;
  int max_delay = 15;
  int train_rows = 5000;
  int test_rows = 1000;
  std::optional<double> threshold;  // fixed eps_c; calibrated when empty
  int surrogates = 200;
  double surrogate_quantile = 0.99;
  std::uint64_t surrogate_seed = 0x5eed;
  std::size_t enumeration_cap = 1'000'000;
};

struct TargetCapacity {
  TargetSpec spec;
  double capacity = 0.0;
};

struct CapacityReport {
  std::vector<TargetCapacity> per_target;  // retained: capacity >= threshold
  std::map<int, double> per_order;
  double total = 0.0;
  double threshold = 0.0;
  int evaluated = 0;
  double min_capacity = 0.0;  // over all evaluated targets
  double max_capacity = 0.0;
  Eigen::Index features = 0;
  CapacityOptions options;
};

/// Surrogate threshold: `surrogate_quantile` (nearest rank) of capacities of
/// targets built from randomly permuted inputs. Surrogate s uses targets[s %
/// targets.size()].
double calibrate_threshold(const CapacityEvaluator& eval, std::span<const double> inputs, std::size_t first,
                           std::span<const TargetSpec> targets, const CapacityOptions& options);

/// Row r of `s` belongs to inputs[first + r]. The first train_rows rows train
/// the readout, the next test_rows rows evaluate it.
CapacityReport total_ipc(const RealMatrix& s, std::span<const double> inputs, std::size_t first,
                         const CapacityOptions& options = {});

nlohmann::json to_json(const CapacityReport& report);
/// One row per retained target: delays, degrees, total_degree, capacity.
void write_capacity_csv(const CapacityReport& report, const std::filesystem::path& path);

}  // namespace kobs
