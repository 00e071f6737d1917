#include "kobs/timescales.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kobs {

namespace {

constexpr double kFrozenBracket = 1e-14;

ComplexMatrix normalized(const HermitianOperator& o, const char* what) {
  const double n = o.matrix().norm();
  if (n == 0.0) throw std::invalid_argument(std::string(what) + ": zero operator");
  return o.matrix() / n;
}

}  // namespace

double zeno_time(const HermitianOperator& h, const HermitianOperator& o) {
  if (h.dim() != o.dim()) throw std::invalid_argument("zeno_time: dimension mismatch");
  const ComplexMatrix on = normalized(o, "zeno_time");
  const ComplexMatrix c1 = commutator(h.matrix(), on);
  const ComplexMatrix c2 = commutator(h.matrix(), c1);
  // Both traces are real for Hermitian H, O; the first is zero by cyclicity.
  const double b = (on * c1).trace().real();
  const double c = (on * c2).trace().real();
  const double bracket = c - b * b;
  if (bracket < kFrozenBracket) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(bracket);
}

ShortTimeCheck short_time_fidelity_check(const HermitianOperator& h, const HermitianOperator& o,
                                         std::span<const double> t_grid) {
  ShortTimeCheck out;
  out.tau_z = zeno_time(h, o);
  const bool frozen = std::isinf(out.tau_z);
  for (double t : t_grid) {
    if (!frozen && std::abs(t) > 0.1 * out.tau_z) {
      throw std::invalid_argument("short_time_fidelity_check: |t| must not exceed 0.1 tau_z");
    }
  }
  const ComplexMatrix on = normalized(o, "short_time_fidelity_check");
  const Propagator prop(h);
  double num = 0.0, den = 0.0;
  for (double t : t_grid) {
    const double f = fidelity(on, prop.heisenberg(on, t));
    const double model = frozen ? 1.0 : 1.0 - (t * t) / (out.tau_z * out.tau_z);
    const double dev = std::abs(f * f - model);
    out.max_deviation = std::max(out.max_deviation, dev);
    const double t3 = std::abs(t * t * t);
    num += dev * t3;
    den += t3 * t3;
  }
  out.cubic_coefficient = den > 0.0 ? num / den : 0.0;
  return out;
}

double heisenberg_time(const RealVector& eigenvalues) {
  if (eigenvalues.size() < 2) throw std::invalid_argument("heisenberg_time: need at least two levels");
  std::vector<double> e(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  std::sort(e.begin(), e.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) sum += e[i + 1] - e[i];
  const double mean = sum / static_cast<double>(e.size() - 1);
  if (mean < 1e-14) throw NumericalError("heisenberg_time: fully degenerate spectrum");
  return 2.0 * std::numbers::pi / mean;
}

double heisenberg_time(const HermitianOperator& h) {
  if (h.dim() < 2) throw std::invalid_argument("heisenberg_time: need dim >= 2");
  return heisenberg_time(spectral_decompose(h).eigenvalues);
}

TimescaleReport timescale_report(std::span<const HermitianOperator> hamiltonians,
                                 std::span<const HermitianOperator> observables) {
  if (hamiltonians.empty()) throw std::invalid_argument("timescale_report: no Hamiltonians");
  if (observables.empty()) throw std::invalid_argument("timescale_report: no observables");
  TimescaleReport rep;
  rep.hamiltonians = static_cast<int>(hamiltonians.size());
  std::map<std::string, std::pair<double, int>> acc;
  double all_sum = 0.0;
  int all_count = 0;
  double th_sum = 0.0;
  for (const auto& h : hamiltonians) {
    th_sum += heisenberg_time(h);
    for (const auto& o : observables) {
      const double tz = zeno_time(h, o);
      auto& slot = acc[o.label()];
      if (std::isfinite(tz)) {
        slot.first += tz;
        slot.second += 1;
        all_sum += tz;
        ++all_count;
      }
    }
  }
  for (const auto& [label, v] : acc) {
    rep.zeno_times[label] = v.second > 0 ? v.first / v.second : std::numeric_limits<double>::infinity();
  }
  rep.zeno_mean = all_count > 0 ? all_sum / all_count : std::numeric_limits<double>::infinity();
  rep.heisenberg_time = th_sum / static_cast<double>(hamiltonians.size());
  return rep;
}

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double from_finite_or_null(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

nlohmann::json to_json(const TimescaleReport& report) {
  nlohmann::json z = nlohmann::json::object();
  for (const auto& [label, tz] : report.zeno_times) z[label] = finite_or_null(tz);
  return {{"zeno_times", z},
          {"zeno_mean", finite_or_null(report.zeno_mean)},
          {"heisenberg_time", report.heisenberg_time},
          {"hamiltonians", report.hamiltonians}};
}

TimescaleReport timescale_report_from_json(const nlohmann::json& j) {
  TimescaleReport r;
  for (const auto& [label, v] : j.at("zeno_times").items()) r.zeno_times[label] = from_finite_or_null(v);
  r.zeno_mean = from_finite_or_null(j.at("zeno_mean"));
  r.heisenberg_time = j.at("heisenberg_time").get<double>();
  r.hamiltonians = j.value("hamiltonians", 0);
  return r;
}

}  // namespace kobs
