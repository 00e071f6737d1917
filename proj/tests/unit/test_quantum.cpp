#include <doctest.h>

#include <cmath>
#include <random>

#include "kobs/quantum.hpp"
#include "kobs/serialize.hpp"
#include "oracles.hpp"

using namespace kobs;
using oracle::Complex;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pauli_on_site places the factor at the requested site") {
  CHECK(max_abs(pauli_on_site(Pauli::Z, 1, 1).matrix() - oracle::z()) == 0.0);

  ComplexMatrix x1(4, 4);
  x1 << 0, 0, 1, 0,  //
      0, 0, 0, 1,    //
      1, 0, 0, 0,    //
      0, 1, 0, 0;
  CHECK(max_abs(pauli_on_site(Pauli::X, 1, 2).matrix() - x1) == 0.0);

  ComplexMatrix z2 = ComplexMatrix::Zero(4, 4);
  z2.diagonal() << 1, -1, 1, -1;
  CHECK(max_abs(pauli_on_site(Pauli::Z, 2, 2).matrix() - z2) == 0.0);
  CHECK(pauli_on_site(Pauli::Z, 2, 2).label() == "Z_2");

  CHECK_THROWS_AS(pauli_on_site(Pauli::Z, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(pauli_on_site(Pauli::Z, 3, 2), std::invalid_argument);
}

TEST_CASE("parse_pauli_label builds Pauli strings") {
  const auto zz = parse_pauli_label("Z_1Z_2", 3);
  CHECK(max_abs(zz.matrix() - oracle::kron(oracle::kron(oracle::z(), oracle::z()), oracle::id(2))) == 0.0);
  CHECK(max_abs(parse_pauli_label("I", 2).matrix() - oracle::id(4)) == 0.0);
  CHECK_THROWS(parse_pauli_label("Q_1", 2));
  CHECK_THROWS(parse_pauli_label("Z_5", 2));
}

TEST_CASE("HermitianOperator rejects non-Hermitian entries") {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS(HermitianOperator(m, "bad"));
  m << 1, Complex(0, 1), Complex(0, -1), 2;
  CHECK_NOTHROW(HermitianOperator(m, "ok"));
}

TEST_CASE("build_ising matches a hand assembly of the couplings") {
  SUBCASE("single site has no couplings") {
    const auto h = build_ising(1, 0.5, 7);
    CHECK(max_abs(h.matrix() - 0.5 * oracle::z()) == 0.0);
  }
  SUBCASE("two sites with J = 0.5: spectrum from the 2x2 blocks") {
    const auto h = build_ising(2, 0.5, std::vector<double>{0.5});
    // Blocks {|00>,|11>}: [[1, .5], [.5, -1]] and {|01>,|10>}: [[0, .5], [.5, 0]].
    const double r = std::sqrt(1.25);
    const auto sd = spectral_decompose(h);
    CHECK(sd.eigenvalues(0) == doctest::Approx(-r).epsilon(1e-12));
    CHECK(sd.eigenvalues(1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(sd.eigenvalues(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sd.eigenvalues(3) == doctest::Approx(r).epsilon(1e-12));
    CHECK(std::abs(sd.eigenvalues(0) + r) < 1e-10);
  }
  SUBCASE("four sites: row-major coupling order and uniform range") {
    const auto j = draw_ising_couplings(4, 42);
    REQUIRE(j.size() == 6);
    for (double v : j) {
      CHECK(v >= 0.25);
      CHECK(v <= 0.75);
    }
    ComplexMatrix expected = ComplexMatrix::Zero(16, 16);
    std::size_t k = 0;
    for (int a = 1; a <= 4; ++a) {
      for (int b = a + 1; b <= 4; ++b) {
        expected += j[k++] * oracle::on_site(oracle::x(), a, 4) * oracle::on_site(oracle::x(), b, 4);
      }
      expected += 0.5 * oracle::on_site(oracle::z(), a, 4);
    }
    const auto h = build_ising(4, 0.5, 42);
    CHECK(max_abs(h.matrix() - expected) < 1e-15);
    CHECK(hermiticity_defect(h.matrix()) == 0.0);
    CHECK(max_abs(build_ising(4, 0.5, 42).matrix() - h.matrix()) == 0.0);
    CHECK(max_abs(build_ising(4, 0.5, 43).matrix() - h.matrix()) > 0.0);
  }
}

TEST_CASE("spectral_decompose") {
  const auto z = spectral_decompose(pauli_on_site(Pauli::Z, 1, 1));
  CHECK(z.eigenvalues(0) == -1.0);
  CHECK(z.eigenvalues(1) == 1.0);
  const auto i4 = spectral_decompose(identity_operator(4));
  for (int k = 0; k < 4; ++k) CHECK(i4.eigenvalues(k) == doctest::Approx(1.0));

  const auto h = build_ising(4, 0.5, 3);
  const auto sd = spectral_decompose(h);
  const double hn = h.matrix().norm();
  CHECK((sd.reconstruct() - h.matrix()).norm() < 1e-10 * hn);
  CHECK((sd.eigenvectors.adjoint() * sd.eigenvectors - oracle::id(16)).norm() < 1e-10);
  for (int k = 1; k < 16; ++k) CHECK(sd.eigenvalues(k) >= sd.eigenvalues(k - 1));

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(spectral_decompose(bad), ContractViolation);
}

TEST_CASE("evolve_operator") {
  const double h = 0.37;
  const HermitianOperator hz(h * oracle::z(), "H");
  const HermitianOperator x(oracle::x(), "X");

  CHECK(max_abs(evolve_operator(hz, x, 0.0).matrix() - x.matrix()) == 0.0);
  for (double t : {0.1, 0.9, 2.5, 11.0}) {
    const ComplexMatrix expected = std::cos(2 * h * t) * oracle::x() - std::sin(2 * h * t) * oracle::y();
    CHECK(max_abs(evolve_operator(hz, x, t).matrix() - expected) < 1e-12);
  }
  const HermitianOperator z(oracle::z(), "Z");
  CHECK(max_abs(evolve_operator(HermitianOperator(oracle::z(), "H"), z, 3.3).matrix() - z.matrix()) < 1e-14);

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianOperator hr(oracle::random_hermitian(8, gen), "H");
    const HermitianOperator o(oracle::random_hermitian(8, gen), "O");
    const double t = 0.3 + trial, s = 1.7;
    const auto ot = evolve_operator(hr, o, t);
    CHECK(std::abs(ot.matrix().norm() - o.matrix().norm()) < 1e-10);
    CHECK(hermiticity_defect(ot.matrix()) == 0.0);
    CHECK((evolve_operator(hr, ot, s).matrix() - evolve_operator(hr, o, t + s).matrix()).norm() < 1e-9);
    // Independent propagator via a Taylor series.
    const ComplexMatrix u = oracle::expm_minus_i(hr.matrix(), t);
    CHECK((ot.matrix() - u.adjoint() * o.matrix() * u).norm() < 1e-9);
  }
  CHECK_THROWS_AS(evolve_operator(hz, pauli_on_site(Pauli::Z, 1, 2), 1.0), std::invalid_argument);
}

TEST_CASE("evolve_density") {
  const double h = 0.6;
  const HermitianOperator hz(h * oracle::z(), "H");
  ComplexVector plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto rho = DensityMatrix::pure(plus);
  CHECK(max_abs(evolve_density(hz, rho, 0.0).matrix() - rho.matrix()) == 0.0);
  for (double t : {0.2, 1.0, 4.0}) {
    const ComplexMatrix r = evolve_density(hz, rho, t).matrix();
    CHECK(((r * oracle::x()).trace().real()) == doctest::Approx(std::cos(2 * h * t)).epsilon(1e-12));
    CHECK(((r * oracle::y()).trace().real()) == doctest::Approx(std::sin(2 * h * t)).epsilon(1e-12));
  }
  const auto h4 = build_ising(3, 0.5, 9);
  const auto mixed = DensityMatrix::maximally_mixed(8);
  CHECK(max_abs(evolve_density(h4, mixed, 5.0).matrix() - mixed.matrix()) < 1e-14);

  std::mt19937_64 gen(8);
  const DensityMatrix r(oracle::random_density(8, gen));
  const auto rt = evolve_density(h4, r, 2.2);
  CHECK(std::abs(rt.matrix().trace() - Complex(1, 0)) < 1e-10);
  const auto ev0 = spectral_decompose(r.matrix()).eigenvalues;
  const auto ev1 = spectral_decompose(rt.matrix()).eigenvalues;
  CHECK((ev0 - ev1).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(evolve_density(hz, r, 1.0), std::invalid_argument);
}

TEST_CASE("DensityMatrix validation") {
  CHECK_THROWS(DensityMatrix(oracle::id(2)));  // trace 2
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS(DensityMatrix{neg});
  CHECK_NOTHROW(DensityMatrix(oracle::id(2) / 2.0));
}

TEST_CASE("partial_trace_first") {
  std::mt19937_64 gen(11);
  const ComplexMatrix sigma = oracle::random_density(2, gen);
  const ComplexMatrix rest = oracle::random_density(4, gen);
  CHECK(max_abs(partial_trace_first(oracle::kron(sigma, rest), 2) - rest) < 1e-14);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  CHECK(max_abs(partial_trace_first(DensityMatrix::pure(bell), 2).matrix() - oracle::id(2) / 2.0) < 1e-15);

  const ComplexMatrix rho = oracle::random_density(4, gen);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  for (int k = 0; k < 2; ++k) {
    ComplexMatrix bra = ComplexMatrix::Zero(2, 4);  // <k| (x) I
    bra(0, 2 * k) = 1;
    bra(1, 2 * k + 1) = 1;
    expected += bra * rho * bra.adjoint();
  }
  CHECK(max_abs(partial_trace_first(rho, 2) - expected) < 1e-12);
  CHECK_THROWS(partial_trace_first(oracle::random_density(6, gen), 4));
}

TEST_CASE("encode_input") {
  const auto a = encode_input(-1.0);
  CHECK(std::abs(a(0) - Complex(1, 0)) == 0.0);
  CHECK(std::abs(a(1)) == 0.0);
  const auto b = encode_input(1.0);
  CHECK(std::abs(b(0)) == 0.0);
  CHECK(std::abs(b(1) - Complex(1, 0)) == 0.0);
  const auto c = encode_input(0.0);
  CHECK(c(0).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(c(1).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(encode_input(0.3).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(encode_input(1.0001), std::invalid_argument);
  CHECK_THROWS_AS(encode_input(-1.5), std::invalid_argument);
}

TEST_CASE("hs_inner and fidelity") {
  CHECK(hs_inner(oracle::x(), oracle::x()) == Complex(2, 0));
  CHECK(std::abs(hs_inner(oracle::x(), oracle::y())) == 0.0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  ComplexMatrix a(5, 5), b(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      a(i, j) = Complex(g(gen), g(gen));
      b(i, j) = Complex(g(gen), g(gen));
    }
  double sq = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) sq += a(i, j).real() * a(i, j).real() + a(i, j).imag() * a(i, j).imag();
  CHECK(hs_inner(a, a).real() == doctest::Approx(sq).epsilon(1e-13));
  CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-12);

  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  CHECK(fidelity(a, Complex(0.3, -2.0) * a) == doctest::Approx(1.0));
  CHECK(fidelity(oracle::x(), oracle::y()) == 0.0);
  const double h = 0.8;
  const HermitianOperator hz(h * oracle::z(), "H");
  for (double t : {0.3, 1.1, 2.0}) {
    const auto xt = evolve_operator(hz, HermitianOperator(oracle::x(), "X"), t);
    CHECK(fidelity(oracle::x(), xt.matrix()) == doctest::Approx(std::abs(std::cos(2 * h * t))).epsilon(1e-12));
  }
  const ComplexMatrix u = oracle::expm_minus_i(oracle::random_hermitian(5, gen), 0.7);
  CHECK(fidelity(u * a * u.adjoint(), u * b * u.adjoint()) == doctest::Approx(fidelity(a, b)).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity(ComplexMatrix::Zero(2, 2), oracle::x()), std::invalid_argument);
}

TEST_CASE("reservoir reset rule keeps a valid density matrix") {
  const auto h = build_ising(3, 0.5, 21);
  const Propagator prop(h);
  DensityMatrix rho = DensityMatrix::maximally_mixed(8);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int step = 0; step < 50; ++step) {
    const ComplexMatrix reduced = partial_trace_first(prop.evolve(rho, 3.0).matrix(), 2);
    const ComplexVector psi = encode_input(u(gen));
    CHECK_NOTHROW(rho = DensityMatrix(oracle::kron(psi * psi.adjoint(), reduced)));
  }
}

TEST_CASE("operator JSON round trip") {
  const auto h = build_ising(2, 0.5, 4);
  const auto j = to_json(h);
  CHECK(j["dim"] == 4);
  CHECK(j["label"] == "H_ising");
  CHECK(j["re"].size() == 16);
  const auto back = operator_from_json(j);
  CHECK(max_abs(back.matrix() - h.matrix()) == 0.0);
  CHECK(back.label() == h.label());
  const auto rho = DensityMatrix::maximally_mixed(4);
  CHECK(max_abs(density_from_json(to_json(rho)).matrix() - rho.matrix()) == 0.0);
}
