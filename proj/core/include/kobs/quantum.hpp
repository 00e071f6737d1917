#pragma once

// Dense complex operator algebra for small spin chains: Pauli strings, the
// transverse Ising reservoir Hamiltonian, exact propagators built from the
// spectral decomposition, partial traces and input-state encoding.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kobs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised when an input violates a documented precondition of an operation
/// that is not a plain argument-range problem (e.g. a non-Hermitian matrix
/// handed to the eigensolver).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a well-formed input leads to a numerically undefined result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTolerance = 1e-12;

/// Largest absolute entry of A - A^dagger.
double hermiticity_defect(const ComplexMatrix& a);

/// Dense Hermitian matrix with a text label. Hermiticity is checked on
/// construction, entry-wise within kHermitianTolerance.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(ComplexMatrix entries, std::string label);

  /// Builds from (A + A^dagger)/2 without checking; used after evolution to
  /// strip rounding drift.
  static HermitianOperator symmetrized(const ComplexMatrix& entries, std::string label);

  Eigen::Index dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }
  const std::string& label() const { return label_; }

  HermitianOperator with_label(std::string label) const;

 private:
  struct Unchecked {};
  HermitianOperator(Unchecked, ComplexMatrix entries, std::string label)
      : entries_(std::move(entries)), label_(std::move(label)) {}

  ComplexMatrix entries_;
  std::string label_;
};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending, eigenvectors as
/// the columns of a unitary.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  ComplexMatrix reconstruct() const;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Checks trace 1 (1e-10), Hermiticity (1e-12 per entry) and a minimum
  /// eigenvalue of at least -1e-10.
  explicit DensityMatrix(ComplexMatrix entries);

  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix pure(const ComplexVector& psi);

  Eigen::Index dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }

 private:
  ComplexMatrix entries_;
};

/// Reports why `entries` is not a valid density matrix, or an empty string.
std::string density_matrix_defect(const ComplexMatrix& entries, double positivity_tolerance = 1e-10);

struct SpinRegister {
  int n_sites = 1;
  int input_site = 1;

  SpinRegister(int n_sites, int input_site = 1);
  Eigen::Index dim() const { return Eigen::Index{1} << n_sites; }
};

enum class Pauli { I, X, Y, Z };

Pauli pauli_from_char(char c);
char pauli_to_char(Pauli p);
ComplexMatrix pauli_matrix(Pauli p);

/// Pauli `kind` at `site` (1-based, site 1 is the leftmost tensor factor).
HermitianOperator pauli_on_site(Pauli kind, int site, int n_sites);

/// Parses labels like "Z_1", "X_2", "Z_1Z_2" or "I" into a Pauli string.
HermitianOperator parse_pauli_label(const std::string& label, int n_sites);

HermitianOperator identity_operator(Eigen::Index dim, std::string label = "I");

/// Couplings J_ij for i < j, drawn uniform on [0.25, 0.75] in row-major order
/// over (i, j). Uniforms are taken as the top 53 bits of successive
/// std::mt19937_64 outputs so the sequence does not depend on the standard
/// library's distribution implementation.
std::vector<double> draw_ising_couplings(int n_sites, std::uint64_t coupling_seed);

/// sum_{i<j} J_ij X_i X_j + sum_i h Z_i with couplings in row-major (i, j)
/// order.
HermitianOperator build_ising(int n_sites, double field_h, const std::vector<double>& couplings);
HermitianOperator build_ising(int n_sites, double field_h, std::uint64_t coupling_seed);

SpectralDecomposition spectral_decompose(const HermitianOperator& h);
/// Same, for a raw matrix; throws ContractViolation if it is not Hermitian.
SpectralDecomposition spectral_decompose(const ComplexMatrix& h);

/// Exact propagator exp(-iHt) assembled from a cached spectral decomposition.
/// Immutable after construction and safe to share between threads.
class Propagator {
 public:
  explicit Propagator(const HermitianOperator& h);
  explicit Propagator(SpectralDecomposition spectrum);

  Eigen::Index dim() const { return spectrum_.dim(); }
  const SpectralDecomposition& spectrum() const { return spectrum_; }

  /// exp(-iHt).
  ComplexMatrix unitary(double t) const;
  /// U^dagger(t) O U(t), for any square O.
  ComplexMatrix heisenberg(const ComplexMatrix& o, double t) const;
  /// U(t) rho U^dagger(t), for any square rho.
  ComplexMatrix schrodinger(const ComplexMatrix& rho, double t) const;

  HermitianOperator evolve(const HermitianOperator& o, double t) const;
  DensityMatrix evolve(const DensityMatrix& rho, double t) const;

 private:
  SpectralDecomposition spectrum_;
};

HermitianOperator evolve_operator(const HermitianOperator& h, const HermitianOperator& o, double t);
DensityMatrix evolve_density(const HermitianOperator& h, const DensityMatrix& rho, double t);

/// Traces out the leading tensor factor of dimension `first_dim`.
ComplexMatrix partial_trace_first(const ComplexMatrix& rho, Eigen::Index first_dim);
DensityMatrix partial_trace_first(const DensityMatrix& rho, Eigen::Index first_dim);

/// sqrt((1-u)/2)|0> + sqrt((1+u)/2)|1>, for u in [-1, 1].
ComplexVector encode_input(double u);

/// Tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// |Tr(A^dagger B)| / (||A||_F ||B||_F); throws on a zero operand.
double fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

/// A B - B A.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace kobs
