#pragma once

// Test-side reference computations, written without the library's own
// helpers so they can serve as independent oracles.

#include <complex>
#include <cstdint>
#include <random>

#include "kobs/quantum.hpp"

namespace oracle {

using kobs::Complex;
using kobs::ComplexMatrix;

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexMatrix id(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// sigma at `site` (1-based, leftmost factor first) on n sites.
inline ComplexMatrix on_site(const ComplexMatrix& sigma, int site, int n) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (int s = 1; s <= n; ++s) out = kron(out, s == site ? sigma : id(2));
  return out;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(gen), g(gen));
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_density(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(gen), g(gen));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// Matrix exponential exp(-i H t) by Taylor series with scaling and squaring;
/// deliberately a different route than the library's eigendecomposition.
inline ComplexMatrix expm_minus_i(const ComplexMatrix& h, double t) {
  const ComplexMatrix a = Complex(0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.1) {
    scaled /= 2;
    ++squarings;
  }
  const ComplexMatrix b = a / std::pow(2.0, squarings);
  ComplexMatrix term = id(h.rows());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace oracle
