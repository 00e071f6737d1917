#pragma once

// (T, V) sweep grids: CSV persistence and the grid-level analyses (Pearson
// correlation, forward differences along V, Zeno-line overlay, saturation
// front).

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kobs/quantum.hpp"

namespace kobs {

struct SweepGrid {
  std::vector<double> t_values;  // ascending clock cycles, one row each
  std::vector<int> v_values;     // ascending multiplexing, one column each
  RealMatrix cells;              // |t| x |v|
  std::string metric;            // ipc_total, krylov_observability, delta_per_V, ...
  std::vector<std::uint64_t> seeds;
  std::string aggregation = "per-seed";  // or "mean"

  /// Throws std::invalid_argument on a shape mismatch or unsorted axes.
  void validate() const;
};

SweepGrid make_grid(std::vector<double> t_values, std::vector<int> v_values, std::string metric);

/// Entrywise mean; all grids must share axes and metric.
SweepGrid mean_grid(const std::vector<SweepGrid>& grids);

/// Header comments carry the metric, aggregation, seeds and both axes; then a
/// "T\V" header row and one row per T. Values use %.17g.
void write_grid_csv(const SweepGrid& grid, const std::filesystem::path& path);
SweepGrid read_grid_csv(const std::filesystem::path& path);

/// Pearson correlation over flattened cells. Throws std::invalid_argument on
/// an axis mismatch and NumericalError when either grid is constant.
double pearson(const SweepGrid& a, const SweepGrid& b);

/// (c[:, j+1] - c[:, j]) / (V_{j+1} - V_j). The result is labelled with the
/// left endpoints V_j.
SweepGrid finite_diff_V(const SweepGrid& grid);

struct ZenoOverlay {
  double tau_z = 0.0;
  double heisenberg_time = 0.0;
  std::vector<std::pair<double, double>> curve;  // (T, V) on T = tau_z V inside the box
};

/// Samples T = tau_z V, clipped to [t_lo, t_hi] x [v_lo, v_hi]; `samples`
/// points evenly spaced in V (empty when the line misses the box).
ZenoOverlay zeno_overlay(double tau_z, double heisenberg_time, double t_lo, double t_hi, double v_lo, double v_hi,
                         int samples = 64);
ZenoOverlay zeno_overlay(double tau_z, double heisenberg_time, const SweepGrid& axes, int samples = 64);

/// Two columns "T V"; the Heisenberg time goes in a header comment.
void write_overlay_table(const ZenoOverlay& overlay, const std::filesystem::path& path);

struct SaturationFront {
  double t = 0.0;  // smallest T of any cell reaching fraction * max
  int v = 0;       // smallest V of any such cell
  double maximum = 0.0;
  double fraction = 0.95;
};

SaturationFront saturation_front(const SweepGrid& grid, double fraction = 0.95);

}  // namespace kobs
