#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kobs/timescales.hpp"
#include "oracles.hpp"

using namespace kobs;

TEST_CASE("zeno_time") {
  SUBCASE("single qubit: 1/(2h)") {
    for (double h : {0.1, 0.5, 2.0}) {
      const HermitianOperator hz(h * oracle::z(), "H");
      CHECK(zeno_time(hz, HermitianOperator(oracle::x(), "X")) == doctest::Approx(1.0 / (2 * h)).epsilon(1e-13));
    }
  }
  SUBCASE("commutator norm identity on random pairs") {
    std::mt19937_64 gen(17);
    for (int i = 0; i < 10; ++i) {
      const HermitianOperator h(oracle::random_hermitian(8, gen), "H");
      const HermitianOperator o(oracle::random_hermitian(8, gen), "O");
      const ComplexMatrix c = h.matrix() * o.matrix() - o.matrix() * h.matrix();
      const double expected = o.matrix().norm() / c.norm();
      CHECK(std::abs(zeno_time(h, o) / expected - 1.0) < 1e-10);
    }
  }
  SUBCASE("scale covariance") {
    const auto h = build_ising(3, 0.5, 4);
    const auto o = parse_pauli_label("Z_2", 3);
    const double t = zeno_time(h, o);
    CHECK(zeno_time(HermitianOperator(3.0 * h.matrix(), "3H"), o) == doctest::Approx(t / 3.0).epsilon(1e-12));
    CHECK(zeno_time(h, HermitianOperator(-5.0 * o.matrix(), "-5O")) == doctest::Approx(t).epsilon(1e-12));
  }
  SUBCASE("frozen observable") {
    CHECK(std::isinf(zeno_time(HermitianOperator(oracle::z(), "H"), HermitianOperator(oracle::z(), "Z"))));
  }
}

TEST_CASE("short_time_fidelity_check") {
  const auto h = build_ising(3, 0.5, 7);
  const auto o = parse_pauli_label("Z_1", 3);
  const double tz = zeno_time(h, o);
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(0.01 * tz * i);
  const auto r = short_time_fidelity_check(h, o, grid);
  CHECK(r.tau_z == doctest::Approx(tz));
  CHECK(r.max_deviation < 1e-3);
  const double late[] = {0.2 * tz};
  CHECK_THROWS_AS(short_time_fidelity_check(h, o, late), std::invalid_argument);
}

TEST_CASE("heisenberg_time") {
  RealVector e(3);
  e << 0.0, 1.0, 3.0;
  CHECK(heisenberg_time(e) == doctest::Approx(4 * M_PI / 3));
  RealVector shifted = e.array() + 7.5;
  CHECK(heisenberg_time(shifted) == doctest::Approx(4 * M_PI / 3));
  RealVector flat = RealVector::Zero(4);
  CHECK_THROWS_AS(heisenberg_time(flat), NumericalError);
  const auto h = build_ising(2, 0.5, 3);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  const RealVector ev = es.eigenvalues();
  CHECK(heisenberg_time(h) == doctest::Approx(2 * M_PI * 3 / (ev(3) - ev(0))));
}

TEST_CASE("timescale_report round trip") {
  const std::vector<HermitianOperator> hs{build_ising(3, 0.5, 1), build_ising(3, 0.5, 2)};
  const std::vector<HermitianOperator> obs{parse_pauli_label("Z_1", 3), parse_pauli_label("Z_2", 3)};
  const auto r = timescale_report(hs, obs);
  CHECK(r.hamiltonians == 2);
  const double z1 = (zeno_time(hs[0], obs[0]) + zeno_time(hs[1], obs[0])) / 2;
  CHECK(r.zeno_times.at("Z_1") == doctest::Approx(z1));
  CHECK(r.heisenberg_time == doctest::Approx((heisenberg_time(hs[0]) + heisenberg_time(hs[1])) / 2));
  const auto back = timescale_report_from_json(to_json(r));
  CHECK(back.zeno_times == r.zeno_times);
  CHECK(back.zeno_mean == r.zeno_mean);
  CHECK(back.heisenberg_time == r.heisenberg_time);
}
