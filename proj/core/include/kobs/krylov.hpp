#pragma once

// Operator Krylov spaces.
//
// Two constructions of the same space are provided: repeated Liouvillian
// images of a seed operator, and copies of the seed evolved to a list of
// times. Both feed a rank-revealing modified Gram-Schmidt (two passes) that
// runs in extended precision (long double); near-degenerate Bohr frequencies
// of even four-site chains push the conditioning of these spaces past what
// double precision resolves at the default tolerance.

#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kobs/quantum.hpp"

namespace kobs {

inline constexpr double kDefaultRankTolerance = 1e-10;
inline constexpr double kSpanEqualityThreshold = 1e-8;

enum class KrylovSource { LiouvillianPowers, EvolvedTimes };

std::string to_string(KrylovSource s);

/// Ordered operators, pairwise orthonormal under Tr(A^dagger B).
struct KrylovBasis {
  std::vector<ComplexMatrix> elements;
  KrylovSource source = KrylovSource::LiouvillianPowers;
  std::vector<double> times;  // sampling times of accepted elements, EvolvedTimes only
  std::string seed_label;

  int grade() const { return static_cast<int>(elements.size()); }
  Eigen::Index operator_dim() const { return elements.empty() ? 0 : elements.front().rows(); }
  /// max_ij |Tr(W_i^dagger W_j) - delta_ij|.
  double orthonormality_defect() const;
  /// Columns are the vectorized elements (column-major), dim^2 x grade.
  ComplexMatrix as_columns() const;
};

/// L(O) = H O - O H.
ComplexMatrix liouvillian_apply(const ComplexMatrix& h, const ComplexMatrix& o);

/// Orthonormalizes O, L(O), L^2(O), ... Each new candidate is L applied to the
/// most recent basis element (equal, modulo the current span, to the next
/// Liouvillian power) and is accepted while its residual after projection
/// exceeds tol times its norm. Stops at the first rejected candidate.
KrylovBasis krylov_space_liouvillian(const HermitianOperator& h, const HermitianOperator& o,
                                     double tol = kDefaultRankTolerance);

/// Orthonormalizes O(t_0), O(t_1), ... with the same acceptance rule. Times
/// must be strictly ascending and start at 0.
KrylovBasis krylov_space_evolved(const HermitianOperator& h, const HermitianOperator& o,
                                 std::span<const double> times, double tol = kDefaultRankTolerance);

/// t_j = j * step for j = 0..count-1.
std::vector<double> equidistant_times(double step, int count);

struct SpanComparison {
  bool equal = false;
  double distance = 0.0;  // ||P_A - P_B||_F on vectorized operators
};

SpanComparison verify_span_equality(const KrylovBasis& a, const KrylovBasis& b);

/// Picks a step tau in [tau_lo, tau_hi] for `count` equidistant samples of
/// O(t) that maximizes the smallest eigenvalue of their Gram matrix. The
/// Gram matrix is Toeplitz in the autocorrelation Tr(O O(m tau)), so no
/// operator is evolved. Any distinct times span the same space in exact
/// arithmetic; this only chooses the best conditioned grid.
double suggest_sampling_step(const HermitianOperator& h, const HermitianOperator& o, int count,
                             double tau_lo = 0.1, double tau_hi = 12.0, int scan = 240);

/// sum_n (n+1) |<W_n, O(t)>|^2 over the Liouvillian basis of O/||O||.
double operator_complexity(const HermitianOperator& h, const HermitianOperator& o, double t,
                           double tol = kDefaultRankTolerance);

struct ComplexityPoint {
  double t = 0.0;
  double complexity = 0.0;
  double weight_sum = 0.0;  // sum_n |beta_n(t)|^2, 1 when the basis is complete
};

/// Operator complexity at many times, sharing one Krylov basis.
std::vector<ComplexityPoint> complexity_profile(const HermitianOperator& h, const HermitianOperator& o,
                                                std::span<const double> times,
                                                double tol = kDefaultRankTolerance);

struct DisjointSpaces {
  KrylovBasis full;
  std::vector<KrylovBasis> per_observable;
};

/// Times outer loop, observables inner loop: O_k(t_j) joins the full basis
/// and the k-th space iff it raises the rank of the accumulated basis.
DisjointSpaces disjoint_spaces(const HermitianOperator& h, std::span<const HermitianOperator> observables,
                               std::span<const double> times, double tol = kDefaultRankTolerance);

/// t_j = j * tau for j = 1..R with R = dim(H)^2. tau maximizes, over the
/// suggest_sampling_step scan, the smallest Gram eigenvalue of M_k equidistant
/// samples taken over all observables (M_k the Liouvillian grade of O_k).
std::vector<double> default_disjoint_times(const HermitianOperator& h, std::span<const HermitianOperator> observables,
                                           double tol = kDefaultRankTolerance);

/// t_j = j * t_H / R for j = 1..R with R = dim(H)^2 and t_H the Heisenberg
/// time. Packs all samples into one Heisenberg time, which leaves the
/// candidate set too ill-conditioned to resolve nearly degenerate Bohr
/// frequencies at the default tolerance on four sites.
std::vector<double> heisenberg_disjoint_times(const HermitianOperator& h);

struct ObservablePart {
  std::string label;
  int grade = 0;    // M_k, dimension of the disjoint space
  int samples = 0;  // R_k = min(V, M_k), at least 1
  double p = 0.0;
};

struct ObservabilityReport {
  std::vector<ObservablePart> per_observable;
  double total = 0.0;
  double clock_cycle = 0.0;
  int multiplexing = 0;
};

/// Krylov observability with per-observable grades taken from the disjoint
/// construction at default_disjoint_times.
ObservabilityReport krylov_observability(const HermitianOperator& h,
                                         std::span<const HermitianOperator> observables, double clock_cycle,
                                         int multiplexing, double tol = kDefaultRankTolerance);

/// Holds a propagator and the disjoint-space grades of a fixed Hamiltonian
/// and observable set, so (T, V) sweeps only evaluate fidelities. Immutable;
/// evaluate() may be called concurrently.
class ObservabilityModel {
 public:
  ObservabilityModel(const HermitianOperator& h, std::vector<HermitianOperator> observables,
                     double tol = kDefaultRankTolerance);
  ObservabilityModel(const HermitianOperator& h, std::vector<HermitianOperator> observables,
                     std::span<const double> disjoint_times, double tol = kDefaultRankTolerance);
  ObservabilityModel(std::shared_ptr<const Propagator> propagator, std::vector<HermitianOperator> observables,
                     std::vector<int> grades);

  ObservabilityReport evaluate(double clock_cycle, int multiplexing) const;

  const std::vector<int>& grades() const { return grades_; }
  const std::vector<HermitianOperator>& observables() const { return observables_; }

 private:
  std::shared_ptr<const Propagator> propagator_;
  std::vector<HermitianOperator> observables_;
  std::vector<int> grades_;
};

/// Propagators keyed by Hamiltonian contents. Lookups take a shared lock;
/// a miss builds the decomposition under an exclusive lock.
class PropagatorCache {
 public:
  std::shared_ptr<const Propagator> get(const HermitianOperator& h);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const Propagator>> entries_;
};

nlohmann::json to_json(const KrylovBasis& basis, bool include_elements = false);
nlohmann::json to_json(const ObservabilityReport& report);

}  // namespace kobs
