#include "kobs/quantum.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace kobs {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols() << ")";
    throw std::invalid_argument(os.str());
  }
}

double top53_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(ComplexMatrix entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  require_square(entries_, "HermitianOperator");
  if (double d = hermiticity_defect(entries_); d > kHermitianTolerance) {
    std::ostringstream os;
    os << "HermitianOperator '" << label_ << "': not Hermitian (max |A - A^dagger| = " << d << ")";
    throw ContractViolation(os.str());
  }
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& entries, std::string label) {
  require_square(entries, "HermitianOperator::symmetrized");
  ComplexMatrix sym = 0.5 * (entries + entries.adjoint());
  return HermitianOperator(Unchecked{}, std::move(sym), std::move(label));
}

HermitianOperator HermitianOperator::with_label(std::string label) const {
  return HermitianOperator(Unchecked{}, entries_, std::move(label));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

std::string density_matrix_defect(const ComplexMatrix& entries, double positivity_tolerance) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) return "not square";
  std::ostringstream os;
  if (double d = hermiticity_defect(entries); d > kHermitianTolerance) {
    os << "not Hermitian (defect " << d << ")";
    return os.str();
  }
  Complex tr = entries.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10) {
    os << "trace " << tr << " != 1";
    return os.str();
  }
  ComplexMatrix sym = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (double lo = es.eigenvalues().minCoeff(); lo < -positivity_tolerance) {
    os << "negative eigenvalue " << lo;
    return os.str();
  }
  return {};
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (auto why = density_matrix_defect(entries_); !why.empty()) {
    throw ContractViolation("DensityMatrix: " + why);
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("DensityMatrix::maximally_mixed: dim must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("DensityMatrix::pure: zero state vector");
  ComplexVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

SpinRegister::SpinRegister(int n, int input) : n_sites(n), input_site(input) {
  if (n_sites < 1) throw std::invalid_argument("SpinRegister: n_sites must be >= 1");
  if (input_site < 1 || input_site > n_sites) {
    throw std::invalid_argument("SpinRegister: input_site out of range");
  }
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("unknown Pauli '") + c + "'");
  }
}

char pauli_to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

ComplexMatrix pauli_matrix(Pauli p) {
  ComplexMatrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, -i, i, 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

namespace {

ComplexMatrix pauli_string(const std::vector<Pauli>& factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (Pauli p : factors) {
    ComplexMatrix next = Eigen::kroneckerProduct(out, pauli_matrix(p)).eval();
    out = std::move(next);
  }
  return out;
}

}  // namespace

HermitianOperator pauli_on_site(Pauli kind, int site, int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("pauli_on_site: n_sites must be >= 1");
  if (site < 1 || site > n_sites) {
    std::ostringstream os;
    os << "pauli_on_site: site " << site << " outside [1, " << n_sites << "]";
    throw std::invalid_argument(os.str());
  }
  std::vector<Pauli> factors(static_cast<std::size_t>(n_sites), Pauli::I);
  factors[static_cast<std::size_t>(site - 1)] = kind;
  std::string label = kind == Pauli::I ? std::string("I")
                                       : std::string(1, pauli_to_char(kind)) + "_" + std::to_string(site);
  return HermitianOperator(pauli_string(factors), std::move(label));
}

HermitianOperator parse_pauli_label(const std::string& label, int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("parse_pauli_label: n_sites must be >= 1");
  std::vector<Pauli> factors(static_cast<std::size_t>(n_sites), Pauli::I);
  if (label == "I") return HermitianOperator(pauli_string(factors), label);

  std::size_t pos = 0;
  bool any = false;
  while (pos < label.size()) {
    Pauli p = pauli_from_char(label[pos++]);
    if (pos >= label.size() || label[pos] != '_') {
      throw std::invalid_argument("parse_pauli_label: expected '_' after Pauli letter in '" + label + "'");
    }
    ++pos;
    std::size_t start = pos;
    while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("parse_pauli_label: missing site index in '" + label + "'");
    int site = std::stoi(label.substr(start, pos - start));
    if (site < 1 || site > n_sites) {
      throw std::invalid_argument("parse_pauli_label: site out of range in '" + label + "'");
    }
    auto& slot = factors[static_cast<std::size_t>(site - 1)];
    if (slot != Pauli::I) {
      throw std::invalid_argument("parse_pauli_label: site repeated in '" + label + "'");
    }
    slot = p;
    any = true;
  }
  if (!any) throw std::invalid_argument("parse_pauli_label: empty label");
  return HermitianOperator(pauli_string(factors), label);
}

HermitianOperator identity_operator(Eigen::Index dim, std::string label) {
  if (dim <= 0) throw std::invalid_argument("identity_operator: dim must be positive");
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), std::move(label));
}

std::vector<double> draw_ising_couplings(int n_sites, std::uint64_t coupling_seed) {
  if (n_sites < 1) throw std::invalid_argument("draw_ising_couplings: n_sites must be >= 1");
  std::mt19937_64 gen(coupling_seed);
  std::vector<double> j;
  j.reserve(static_cast<std::size_t>(n_sites * (n_sites - 1) / 2));
  for (int a = 0; a < n_sites; ++a) {
    for (int b = a + 1; b < n_sites; ++b) {
      j.push_back(0.25 + 0.5 * top53_uniform(gen));
    }
  }
  return j;
}

HermitianOperator build_ising(int n_sites, double field_h, const std::vector<double>& couplings) {
  if (n_sites < 1) throw std::invalid_argument("build_ising: n_sites must be >= 1");
  const std::size_t pairs = static_cast<std::size_t>(n_sites * (n_sites - 1) / 2);
  if (couplings.size() != pairs) {
    throw std::invalid_argument("build_ising: expected " + std::to_string(pairs) + " couplings");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> x, z;
  for (int s = 1; s <= n_sites; ++s) {
    x.push_back(pauli_on_site(Pauli::X, s, n_sites).matrix());
    z.push_back(pauli_on_site(Pauli::Z, s, n_sites).matrix());
  }
  std::size_t k = 0;
  for (int a = 0; a < n_sites; ++a) {
    for (int b = a + 1; b < n_sites; ++b) {
      h += couplings[k++] * (x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)]);
    }
  }
  for (const auto& zi : z) h += field_h * zi;
  return HermitianOperator(std::move(h), "H_ising");
}

HermitianOperator build_ising(int n_sites, double field_h, std::uint64_t coupling_seed) {
  return build_ising(n_sites, field_h, draw_ising_couplings(n_sites, coupling_seed));
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("spectral_decompose: eigensolver failed");
  // Eigen returns eigenvalues in ascending order.
  return SpectralDecomposition{es.eigenvalues(), es.eigenvectors()};
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& h) {
  require_square(h, "spectral_decompose");
  if (double d = hermiticity_defect(h); d > kHermitianTolerance) {
    std::ostringstream os;
    os << "spectral_decompose: input is not Hermitian (defect " << d << ")";
    throw ContractViolation(os.str());
  }
  return spectral_decompose(HermitianOperator(h, ""));
}

Propagator::Propagator(const HermitianOperator& h) : spectrum_(spectral_decompose(h)) {}

Propagator::Propagator(SpectralDecomposition spectrum) : spectrum_(std::move(spectrum)) {}

ComplexMatrix Propagator::unitary(double t) const {
  const auto& v = spectrum_.eigenvectors;
  ComplexVector phases(spectrum_.dim());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -spectrum_.eigenvalues(i) * t);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix Propagator::heisenberg(const ComplexMatrix& o, double t) const {
  require_square(o, "Propagator::heisenberg");
  if (o.rows() != dim()) throw std::invalid_argument("Propagator::heisenberg: dimension mismatch");
  if (t == 0.0) return o;
  ComplexMatrix u = unitary(t);
  return u.adjoint() * o * u;
}

ComplexMatrix Propagator::schrodinger(const ComplexMatrix& rho, double t) const {
  require_square(rho, "Propagator::schrodinger");
  if (rho.rows() != dim()) throw std::invalid_argument("Propagator::schrodinger: dimension mismatch");
  if (t == 0.0) return rho;
  ComplexMatrix u = unitary(t);
  return u * rho * u.adjoint();
}

HermitianOperator Propagator::evolve(const HermitianOperator& o, double t) const {
  if (t == 0.0) return o;
  return HermitianOperator::symmetrized(heisenberg(o.matrix(), t), o.label());
}

DensityMatrix Propagator::evolve(const DensityMatrix& rho, double t) const {
  if (t == 0.0) return rho;
  ComplexMatrix out = schrodinger(rho.matrix(), t);
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

HermitianOperator evolve_operator(const HermitianOperator& h, const HermitianOperator& o, double t) {
  require_same_dim(h.matrix(), o.matrix(), "evolve_operator");
  return Propagator(h).evolve(o, t);
}

DensityMatrix evolve_density(const HermitianOperator& h, const DensityMatrix& rho, double t) {
  require_same_dim(h.matrix(), rho.matrix(), "evolve_density");
  return Propagator(h).evolve(rho, t);
}

ComplexMatrix partial_trace_first(const ComplexMatrix& rho, Eigen::Index first_dim) {
  require_square(rho, "partial_trace_first");
  if (first_dim <= 0 || rho.rows() % first_dim != 0) {
    throw std::invalid_argument("partial_trace_first: dimension " + std::to_string(rho.rows()) +
                                " not divisible by " + std::to_string(first_dim));
  }
  const Eigen::Index rest = rho.rows() / first_dim;
  ComplexMatrix out = ComplexMatrix::Zero(rest, rest);
  for (Eigen::Index a = 0; a < first_dim; ++a) {
    out += rho.block(a * rest, a * rest, rest, rest);
  }
  return out;
}

DensityMatrix partial_trace_first(const DensityMatrix& rho, Eigen::Index first_dim) {
  return DensityMatrix(partial_trace_first(rho.matrix(), first_dim));
}

ComplexVector encode_input(double u) {
  if (!(u >= -1.0 && u <= 1.0)) {
    throw std::invalid_argument("encode_input: input " + std::to_string(u) + " outside [-1, 1]");
  }
  ComplexVector psi(2);
  psi(0) = std::sqrt((1.0 - u) / 2.0);
  psi(1) = std::sqrt((1.0 + u) / 2.0);
  return psi;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return (a.conjugate().cwiseProduct(b)).sum();
}

double fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "fidelity");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("fidelity: zero-norm operand");
  return std::min(1.0, std::abs(hs_inner(a, b)) / (na * nb));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

}  // namespace kobs
