#include "kobs/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kobs/serialize.hpp"
#include "kobs/timescales.hpp"

namespace kobs {

namespace {

using XReal = long double;
using XComplex = std::complex<long double>;
using XMatrix = Eigen::Matrix<XComplex, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<XComplex, Eigen::Dynamic, 1>;
using XRealVector = Eigen::Matrix<XReal, Eigen::Dynamic, 1>;

XMatrix widen(const ComplexMatrix& m) { return m.cast<XComplex>(); }

ComplexMatrix narrow(const XMatrix& m) { return m.cast<Complex>(); }

XVector vectorize(const XMatrix& m) { return Eigen::Map<const XVector>(m.data(), m.size()); }

XMatrix unvectorize(const XVector& v, Eigen::Index n) { return Eigen::Map<const XMatrix>(v.data(), n, n); }

void require_same_dim(const HermitianOperator& h, const HermitianOperator& o, const char* what) {
  if (h.dim() != o.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void require_nonzero(const HermitianOperator& o, const char* what) {
  if (o.matrix().norm() == 0.0) throw std::invalid_argument(std::string(what) + ": zero seed operator");
}

// Rank-revealing MGS with a second pass. Candidates are normalized first, so
// the residual after projection is already relative.
class GramSchmidt {
 public:
  bool try_append(XVector v, double tol) {
    const XReal n0 = v.norm();
    if (n0 == 0.0L) return false;
    v /= n0;
    project_out(v);
    project_out(v);
    const XReal r = v.norm();
    if (!(r > static_cast<XReal>(tol))) return false;
    basis_.push_back(v / r);
    return true;
  }

  void force_append(XVector v) {
    project_out(v);
    project_out(v);
    basis_.push_back(v / v.norm());
  }

  const std::vector<XVector>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }

 private:
  void project_out(XVector& v) const {
    for (const auto& w : basis_) v -= w * w.dot(v);
  }

  std::vector<XVector> basis_;
};

// Eigenbasis of H in extended precision; O(t)_ij = Ob_ij e^{i w_ij t} in it.
class ExtendedEigenbasis {
 public:
  explicit ExtendedEigenbasis(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<XMatrix> es(widen(h.matrix()));
    if (es.info() != Eigen::Success) throw NumericalError("krylov: eigensolver failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  Eigen::Index dim() const { return energies_.size(); }
  XReal frequency(Eigen::Index i, Eigen::Index j) const { return energies_(i) - energies_(j); }
  XReal spectral_scale() const { return energies_.cwiseAbs().maxCoeff(); }

  XMatrix rotate_in(const ComplexMatrix& o) const { return vectors_.adjoint() * widen(o) * vectors_; }
  XMatrix rotate_out(const XMatrix& m) const { return vectors_ * m * vectors_.adjoint(); }

  XMatrix evolve(const XMatrix& ob, double t) const {
    const Eigen::Index n = dim();
    XMatrix m(n, n);
    const XReal tt = static_cast<XReal>(t);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const XReal phase = frequency(i, j) * tt;
        m(i, j) = ob(i, j) * XComplex(std::cos(phase), std::sin(phase));
      }
    }
    return m;
  }

 private:
  XRealVector energies_;
  XMatrix vectors_;
};

// Coordinates for time-sampled seeds in which every candidate lies exactly in
// the span of the evolved seeds. Sampled sets are often conditioned near
// 1e-13, and Gram-Schmidt divides by residuals that small, so any rounding
// that leaves the space gets inflated to ~1e-6. Two sources are removed:
//  - entries of Ob that vanish by symmetry come out near 1e-19, each with its
//    own frequency; they are flushed to zero (genuine entries sit orders of
//    magnitude above the cut);
//  - the zero-frequency block (the diagonal, plus degenerate levels) is the
//    same in every sample of a seed; it is stored as coordinates on an
//    orthonormal basis of the seeds' static parts instead of entrywise, so
//    rounding cannot break the fixed pattern.
// A vector holds the n^2 entries with the static block zeroed, followed by
// the static coordinates. The map is an isometry onto its image.
class SampledSeeds {
 public:
  SampledSeeds(const HermitianOperator& h, std::span<const HermitianOperator> seeds) : eb_(h) {
    const Eigen::Index n = eb_.dim();
    const XReal eps = std::numeric_limits<XReal>::epsilon();
    const XReal w_cut = 64 * static_cast<XReal>(n) * eps * std::max(eb_.spectral_scale(), XReal(1));
    static_mask_.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) static_mask_(i, j) = std::abs(eb_.frequency(i, j)) <= w_cut;

    std::vector<XVector> statics;
    for (const auto& o : seeds) {
      XMatrix ob = eb_.rotate_in(o.matrix());
      const XReal cut = 64 * static_cast<XReal>(n) * eps * ob.norm();
      for (Eigen::Index i = 0; i < ob.size(); ++i) {
        if (std::abs(ob.data()[i]) <= cut) ob.data()[i] = XComplex(0);
      }
      XMatrix st = XMatrix::Zero(n, n);
      for (Eigen::Index i = 0; i < ob.size(); ++i) {
        if (static_mask_.data()[i]) std::swap(st.data()[i], ob.data()[i]);
      }
      dynamic_.push_back(std::move(ob));
      statics.push_back(vectorize(st));
    }
    // orthonormal basis of the static parts, then each seed's coordinates
    GramSchmidt gs;
    for (const auto& v : statics) gs.try_append(v, 1e-14);
    static_basis_ = gs.basis();
    for (const auto& v : statics) {
      XVector c(static_cast<Eigen::Index>(static_basis_.size()));
      for (std::size_t m = 0; m < static_basis_.size(); ++m) c(static_cast<Eigen::Index>(m)) = static_basis_[m].dot(v);
      static_coords_.push_back(std::move(c));
    }
  }

  const ExtendedEigenbasis& eigenbasis() const { return eb_; }

  XVector sample(std::size_t k, double t) const {
    const Eigen::Index n2 = eb_.dim() * eb_.dim();
    XVector v(n2 + static_cast<Eigen::Index>(static_basis_.size()));
    v.head(n2) = vectorize(eb_.evolve(dynamic_[k], t));
    v.tail(static_cast<Eigen::Index>(static_basis_.size())) = static_coords_[k];
    return v;
  }

  ComplexMatrix decode(const XVector& v) const {
    const Eigen::Index n = eb_.dim();
    XVector full = v.head(n * n);
    for (std::size_t m = 0; m < static_basis_.size(); ++m) full += static_basis_[m] * v(n * n + static_cast<Eigen::Index>(m));
    return narrow(eb_.rotate_out(unvectorize(full, n)));
  }

 private:
  ExtendedEigenbasis eb_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> static_mask_;
  std::vector<XMatrix> dynamic_;
  std::vector<XVector> static_basis_;
  std::vector<XVector> static_coords_;
};

KrylovBasis to_basis(const GramSchmidt& gs, Eigen::Index n, KrylovSource source, std::string label,
                     const SampledSeeds* coords = nullptr) {
  KrylovBasis out;
  out.source = source;
  out.seed_label = std::move(label);
  out.elements.reserve(gs.size());
  for (const auto& v : gs.basis()) out.elements.push_back(coords ? coords->decode(v) : narrow(unvectorize(v, n)));
  return out;
}

void require_times(std::span<const double> times, const char* what, bool from_zero) {
  if (times.empty()) throw std::invalid_argument(std::string(what) + ": empty time list");
  if (from_zero && times.front() != 0.0) throw std::invalid_argument(std::string(what) + ": times must start at 0");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) {
      throw std::invalid_argument(std::string(what) + ": times must be strictly ascending and distinct");
    }
  }
}

}  // namespace

std::string to_string(KrylovSource s) {
  return s == KrylovSource::LiouvillianPowers ? "liouvillian_powers" : "evolved_times";
}

double KrylovBasis::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const Complex g = hs_inner(elements[i], elements[j]);
      worst = std::max(worst, std::abs(g - Complex(i == j ? 1.0 : 0.0, 0.0)));
    }
  }
  return worst;
}

ComplexMatrix KrylovBasis::as_columns() const {
  const Eigen::Index n = operator_dim();
  ComplexMatrix cols(n * n, grade());
  for (int k = 0; k < grade(); ++k) cols.col(k) = Eigen::Map<const ComplexVector>(elements[k].data(), n * n);
  return cols;
}

ComplexMatrix liouvillian_apply(const ComplexMatrix& h, const ComplexMatrix& o) {
  if (h.rows() != o.rows() || h.cols() != o.cols() || h.rows() != h.cols()) {
    throw std::invalid_argument("liouvillian_apply: dimension mismatch");
  }
  return commutator(h, o);
}

KrylovBasis krylov_space_liouvillian(const HermitianOperator& h, const HermitianOperator& o, double tol) {
  require_same_dim(h, o, "krylov_space_liouvillian");
  require_nonzero(o, "krylov_space_liouvillian");
  const Eigen::Index n = o.dim();
  const XMatrix hx = widen(h.matrix());
  GramSchmidt gs;
  gs.try_append(vectorize(widen(o.matrix())), tol);
  const auto limit = static_cast<std::size_t>(n * n);
  while (gs.size() < limit) {
    const XMatrix last = unvectorize(gs.basis().back(), n);
    const XMatrix next = hx * last - last * hx;
    if (!gs.try_append(vectorize(next), tol)) break;
  }
  return to_basis(gs, n, KrylovSource::LiouvillianPowers, o.label());
}

KrylovBasis krylov_space_evolved(const HermitianOperator& h, const HermitianOperator& o,
                                 std::span<const double> times, double tol) {
  require_same_dim(h, o, "krylov_space_evolved");
  require_nonzero(o, "krylov_space_evolved");
  require_times(times, "krylov_space_evolved", true);
  const Eigen::Index n = o.dim();
  const SampledSeeds coords(h, std::span<const HermitianOperator>(&o, 1));
  GramSchmidt gs;
  std::vector<double> accepted;
  for (double t : times) {
    if (!gs.try_append(coords.sample(0, t), tol)) break;
    accepted.push_back(t);
  }
  KrylovBasis out = to_basis(gs, n, KrylovSource::EvolvedTimes, o.label(), &coords);
  out.times = std::move(accepted);
  return out;
}

std::vector<double> equidistant_times(double step, int count) {
  if (!(step > 0.0)) throw std::invalid_argument("equidistant_times: step must be positive");
  if (count < 1) throw std::invalid_argument("equidistant_times: count must be >= 1");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) t[static_cast<std::size_t>(j)] = j * step;
  return t;
}

SpanComparison verify_span_equality(const KrylovBasis& a, const KrylovBasis& b) {
  if (a.grade() > 0 && b.grade() > 0 && a.operator_dim() != b.operator_dim()) {
    throw std::invalid_argument("verify_span_equality: operator dimensions differ");
  }
  // Explicit projectors: the trace identity ||P_A - P_B||^2 = M_A + M_B - 2||A^dagger B||^2
  // cancels catastrophically when the spans nearly agree.
  const ComplexMatrix ca = a.as_columns();
  const ComplexMatrix cb = b.as_columns();
  const Eigen::Index d = std::max(ca.rows(), cb.rows());
  ComplexMatrix pa = ComplexMatrix::Zero(d, d);
  ComplexMatrix pb = ComplexMatrix::Zero(d, d);
  if (a.grade() > 0) pa.noalias() = ca * ca.adjoint();
  if (b.grade() > 0) pb.noalias() = cb * cb.adjoint();
  SpanComparison out;
  out.distance = (pa - pb).norm();
  out.equal = a.grade() == b.grade() && out.distance < kSpanEqualityThreshold;
  return out;
}

namespace {

std::vector<double> scan_grid(double tau_lo, double tau_hi, int scan) {
  std::vector<double> taus(static_cast<std::size_t>(scan));
  for (int s = 0; s < scan; ++s) taus[static_cast<std::size_t>(s)] = scan == 1 ? tau_lo : tau_lo + (tau_hi - tau_lo) * s / (scan - 1);
  return taus;
}

// Smallest eigenvalue of the normalized Gram matrix of `count` samples
// O(m tau), for each tau. The Gram matrix is Hermitian Toeplitz in
// c(s) = sum_ij |Ob_ij|^2 exp(i w_ij s) / ||O||^2.
std::vector<double> toeplitz_scores(const SpectralDecomposition& sd, const HermitianOperator& o, int count,
                                    std::span<const double> taus) {
  const ComplexMatrix ob = sd.eigenvectors.adjoint() * o.matrix() * sd.eigenvectors;
  const Eigen::Index n = sd.dim();
  std::vector<double> w, weight;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m2 = std::norm(ob(i, j));
      if (m2 == 0.0) continue;
      w.push_back(sd.eigenvalues(i) - sd.eigenvalues(j));
      weight.push_back(m2);
    }
  }
  const double c0 = o.matrix().squaredNorm();
  std::vector<double> scores;
  scores.reserve(taus.size());
  ComplexMatrix gram(count, count);
  std::vector<Complex> c(static_cast<std::size_t>(count));
  for (double tau : taus) {
    for (int m = 0; m < count; ++m) {
      Complex acc(0.0, 0.0);
      for (std::size_t k = 0; k < w.size(); ++k) acc += weight[k] * std::polar(1.0, w[k] * m * tau);
      c[static_cast<std::size_t>(m)] = acc / c0;
    }
    for (int p = 0; p < count; ++p) {
      for (int q = 0; q < count; ++q) {
        gram(p, q) = q >= p ? c[static_cast<std::size_t>(q - p)] : std::conj(c[static_cast<std::size_t>(p - q)]);
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
    scores.push_back(es.eigenvalues()(0));
  }
  return scores;
}

}  // namespace

double suggest_sampling_step(const HermitianOperator& h, const HermitianOperator& o, int count, double tau_lo,
                             double tau_hi, int scan) {
  require_same_dim(h, o, "suggest_sampling_step");
  require_nonzero(o, "suggest_sampling_step");
  if (count < 1 || scan < 1 || !(tau_lo > 0.0) || !(tau_hi >= tau_lo)) {
    throw std::invalid_argument("suggest_sampling_step: bad scan parameters");
  }
  if (count == 1) return tau_lo;
  const auto taus = scan_grid(tau_lo, tau_hi, scan);
  const auto scores = toeplitz_scores(spectral_decompose(h), o, count, taus);
  return taus[static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin())];
}

std::vector<ComplexityPoint> complexity_profile(const HermitianOperator& h, const HermitianOperator& o,
                                                std::span<const double> times, double tol) {
  require_same_dim(h, o, "complexity_profile");
  require_nonzero(o, "complexity_profile");
  const HermitianOperator on = HermitianOperator::symmetrized(o.matrix() / o.matrix().norm(), o.label());
  const KrylovBasis basis = krylov_space_liouvillian(h, on, tol);
  const ExtendedEigenbasis eb(h);
  const XMatrix ob = eb.rotate_in(on.matrix());
  std::vector<XVector> w;
  for (const auto& e : basis.elements) w.push_back(vectorize(eb.rotate_in(e)));
  std::vector<ComplexityPoint> out;
  out.reserve(times.size());
  for (double t : times) {
    const XVector ot = vectorize(eb.evolve(ob, t));
    ComplexityPoint pt;
    pt.t = t;
    long double k = 0.0L, sum = 0.0L;
    for (std::size_t n = 0; n < w.size(); ++n) {
      const long double b2 = std::norm(w[n].dot(ot));
      k += static_cast<long double>(n + 1) * b2;
      sum += b2;
    }
    pt.complexity = static_cast<double>(k);
    pt.weight_sum = static_cast<double>(sum);
    out.push_back(pt);
  }
  return out;
}

double operator_complexity(const HermitianOperator& h, const HermitianOperator& o, double t, double tol) {
  const double ts[] = {t};
  return complexity_profile(h, o, ts, tol).front().complexity;
}

DisjointSpaces disjoint_spaces(const HermitianOperator& h, std::span<const HermitianOperator> observables,
                               std::span<const double> times, double tol) {
  if (observables.empty()) throw std::invalid_argument("disjoint_spaces: empty observable list");
  if (times.empty()) throw std::invalid_argument("disjoint_spaces: need R >= 1 times");
  for (const auto& o : observables) {
    require_same_dim(h, o, "disjoint_spaces");
    require_nonzero(o, "disjoint_spaces");
  }
  const Eigen::Index n = h.dim();
  const SampledSeeds coords(h, observables);

  GramSchmidt full;
  std::vector<GramSchmidt> parts(observables.size());
  std::vector<std::vector<double>> part_times(observables.size());
  std::vector<double> full_times;
  const auto limit = static_cast<std::size_t>(n * n);
  for (double t : times) {
    for (std::size_t k = 0; k < observables.size(); ++k) {
      if (full.size() >= limit) break;
      const XVector cand = coords.sample(k, t);
      if (!full.try_append(cand, tol)) continue;
      // Accepted candidates are independent of everything before them, so
      // each observable's subset is orthonormalized on its own.
      parts[k].force_append(cand / cand.norm());
      part_times[k].push_back(t);
      full_times.push_back(t);
    }
  }
  DisjointSpaces out;
  out.full = to_basis(full, n, KrylovSource::EvolvedTimes, "full", &coords);
  out.full.times = std::move(full_times);
  for (std::size_t k = 0; k < observables.size(); ++k) {
    KrylovBasis b = to_basis(parts[k], n, KrylovSource::EvolvedTimes, observables[k].label(), &coords);
    b.times = std::move(part_times[k]);
    out.per_observable.push_back(std::move(b));
  }
  return out;
}

std::vector<double> default_disjoint_times(const HermitianOperator& h, std::span<const HermitianOperator> observables,
                                           double tol) {
  if (observables.empty()) throw std::invalid_argument("default_disjoint_times: empty observable list");
  const auto taus = scan_grid(0.1, 12.0, 240);
  const SpectralDecomposition sd = spectral_decompose(h);
  std::vector<double> worst(taus.size(), std::numeric_limits<double>::infinity());
  for (const auto& o : observables) {
    const int m = krylov_space_liouvillian(h, o, tol).grade();
    if (m < 2) continue;
    const auto scores = toeplitz_scores(sd, o, m, taus);
    for (std::size_t i = 0; i < taus.size(); ++i) worst[i] = std::min(worst[i], scores[i]);
  }
  const double tau = taus[static_cast<std::size_t>(std::max_element(worst.begin(), worst.end()) - worst.begin())];
  const int r = static_cast<int>(h.dim() * h.dim());
  std::vector<double> t(static_cast<std::size_t>(r));
  for (int j = 1; j <= r; ++j) t[static_cast<std::size_t>(j - 1)] = j * tau;
  return t;
}

std::vector<double> heisenberg_disjoint_times(const HermitianOperator& h) {
  const double t_max = heisenberg_time(h);
  const int r = static_cast<int>(h.dim() * h.dim());
  std::vector<double> t(static_cast<std::size_t>(r));
  for (int j = 1; j <= r; ++j) t[static_cast<std::size_t>(j - 1)] = j * t_max / r;
  return t;
}

namespace {

std::vector<int> grades_of(const DisjointSpaces& spaces) {
  std::vector<int> g;
  for (const auto& b : spaces.per_observable) g.push_back(b.grade());
  return g;
}

}  // namespace

ObservabilityModel::ObservabilityModel(const HermitianOperator& h, std::vector<HermitianOperator> observables,
                                       double tol)
    : ObservabilityModel(h, observables, default_disjoint_times(h, observables, tol), tol) {}

ObservabilityModel::ObservabilityModel(const HermitianOperator& h, std::vector<HermitianOperator> observables,
                                       std::span<const double> disjoint_times, double tol)
    : propagator_(std::make_shared<const Propagator>(h)),
      observables_(std::move(observables)),
      grades_(grades_of(disjoint_spaces(h, observables_, disjoint_times, tol))) {}

ObservabilityModel::ObservabilityModel(std::shared_ptr<const Propagator> propagator,
                                       std::vector<HermitianOperator> observables, std::vector<int> grades)
    : propagator_(std::move(propagator)), observables_(std::move(observables)), grades_(std::move(grades)) {
  if (!propagator_) throw std::invalid_argument("ObservabilityModel: null propagator");
  if (observables_.empty()) throw std::invalid_argument("ObservabilityModel: empty observable list");
  if (grades_.size() != observables_.size()) throw std::invalid_argument("ObservabilityModel: one grade per observable");
  for (const auto& o : observables_) {
    if (o.dim() != propagator_->dim()) throw std::invalid_argument("ObservabilityModel: dimension mismatch");
  }
}

ObservabilityReport ObservabilityModel::evaluate(double clock_cycle, int multiplexing) const {
  if (!(clock_cycle > 0.0)) throw std::invalid_argument("krylov_observability: T must be positive");
  if (multiplexing < 1) throw std::invalid_argument("krylov_observability: V must be >= 1");
  ObservabilityReport rep;
  rep.clock_cycle = clock_cycle;
  rep.multiplexing = multiplexing;
  for (std::size_t k = 0; k < observables_.size(); ++k) {
    ObservablePart part;
    part.label = observables_[k].label();
    part.grade = grades_[k];
    part.samples = std::max(1, std::min(multiplexing, part.grade));
    part.p = 1.0;
    const double dt = clock_cycle / part.samples;
    ComplexMatrix prev = propagator_->heisenberg(observables_[k].matrix(), dt);
    for (int j = 1; j < part.samples; ++j) {
      ComplexMatrix next = propagator_->heisenberg(observables_[k].matrix(), (j + 1) * dt);
      part.p += 1.0 - fidelity(prev, next);
      prev = std::move(next);
    }
    rep.total += part.p;
    rep.per_observable.push_back(std::move(part));
  }
  return rep;
}

ObservabilityReport krylov_observability(const HermitianOperator& h, std::span<const HermitianOperator> observables,
                                         double clock_cycle, int multiplexing, double tol) {
  if (observables.empty()) throw std::invalid_argument("krylov_observability: empty observable list");
  const ObservabilityModel model(h, std::vector<HermitianOperator>(observables.begin(), observables.end()), tol);
  return model.evaluate(clock_cycle, multiplexing);
}

std::shared_ptr<const Propagator> PropagatorCache::get(const HermitianOperator& h) {
  const auto* bytes = reinterpret_cast<const char*>(h.matrix().data());
  std::string key(bytes, bytes + sizeof(Complex) * static_cast<std::size_t>(h.matrix().size()));
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  auto p = std::make_shared<const Propagator>(h);
  entries_.emplace(std::move(key), p);
  return p;
}

std::size_t PropagatorCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

nlohmann::json to_json(const KrylovBasis& basis, bool include_elements) {
  nlohmann::json j{{"grade", basis.grade()},
                   {"source", to_string(basis.source)},
                   {"seed_label", basis.seed_label},
                   {"operator_dim", basis.operator_dim()}};
  if (basis.source == KrylovSource::EvolvedTimes) j["times"] = basis.times;
  if (include_elements) {
    nlohmann::json els = nlohmann::json::array();
    for (int k = 0; k < basis.grade(); ++k) els.push_back(matrix_to_json(basis.elements[k], "W_" + std::to_string(k)));
    j["elements"] = std::move(els);
  }
  return j;
}

nlohmann::json to_json(const ObservabilityReport& report) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : report.per_observable) {
    parts.push_back({{"label", p.label}, {"grade", p.grade}, {"samples", p.samples}, {"p", p.p}});
  }
  return {{"per_observable", parts},
          {"total", report.total},
          {"clock_cycle", report.clock_cycle},
          {"multiplexing", report.multiplexing}};
}

}  // namespace kobs
