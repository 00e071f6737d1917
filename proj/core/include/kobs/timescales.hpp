#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kobs/quantum.hpp"

namespace kobs {

/// Operator Zeno time of O under H, from the short-time expansion
/// |F(t)|^2 = 1 - t^2 / tau_z^2 + O(t^3) of the normalized self-overlap:
///   tau_z^-2 = Tr(O [H,[H,O]]) - Tr(O [H,O])^2,  O := O / ||O||_F.
/// Returns +infinity when the bracket falls below 1e-14 (frozen observable).
double zeno_time(const HermitianOperator& h, const HermitianOperator& o);

struct ShortTimeCheck {
  double max_deviation = 0.0;  // max_t | |F(t)|^2 - (1 - t^2/tau_z^2) |
  double cubic_coefficient = 0.0;  // least-squares c in deviation ~ c t^3
  double tau_z = 0.0;
};

/// Requires every t to satisfy |t| <= 0.1 tau_z (any t when tau_z is
/// infinite).
ShortTimeCheck short_time_fidelity_check(const HermitianOperator& h, const HermitianOperator& o,
                                         std::span<const double> t_grid);

/// 2 pi / <s>, <s> the mean of all N-1 nearest-level spacings (degenerate
/// spacings included).
double heisenberg_time(const HermitianOperator& h);
double heisenberg_time(const RealVector& eigenvalues);

struct TimescaleReport {
  std::map<std::string, double> zeno_times;  // per observable, averaged over Hamiltonians
  double zeno_mean = 0.0;                     // over observables and Hamiltonians (finite values)
  double heisenberg_time = 0.0;               // averaged over Hamiltonians
  int hamiltonians = 0;
};

TimescaleReport timescale_report(std::span<const HermitianOperator> hamiltonians,
                                 std::span<const HermitianOperator> observables);

nlohmann::json to_json(const TimescaleReport& report);
TimescaleReport timescale_report_from_json(const nlohmann::json& j);

}  // namespace kobs
