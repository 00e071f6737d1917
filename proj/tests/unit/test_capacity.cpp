#include <doctest.h>

#include <cmath>
#include <random>

#include "kobs/capacity.hpp"
#include "kobs/reservoir.hpp"

using namespace kobs;

namespace {

// Explicit Legendre coefficients, independent of the recurrence.
double legendre_explicit(int k, double x) {
  switch (k) {
    case 0: return 1;
    case 1: return x;
    case 2: return (3 * x * x - 1) / 2;
    case 3: return (5 * std::pow(x, 3) - 3 * x) / 2;
    case 4: return (35 * std::pow(x, 4) - 30 * x * x + 3) / 8;
    case 5: return (63 * std::pow(x, 5) - 70 * std::pow(x, 3) + 15 * x) / 8;
    default: return NAN;
  }
}

RealMatrix gaussian(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  RealMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  return m;
}

}  // namespace

TEST_CASE("legendre") {
  CHECK(legendre(5, 0.7) == doctest::Approx(-0.36519875).epsilon(1e-12));
  for (int k = 0; k <= 5; ++k) {
    for (double x : {-1.0, -0.4, 0.0, 0.33, 0.9, 1.0}) CHECK(legendre(k, x) == doctest::Approx(legendre_explicit(k, x)));
    CHECK(legendre(k, 1.0) == doctest::Approx(1.0));
  }
  // orthogonality, 2/(2k+1) on the diagonal, by 20-point midpoint refinement
  const int n = 200000;
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      double s = 0;
      for (int i = 0; i < n; ++i) {
        const double x = -1 + (i + 0.5) * 2.0 / n;
        s += legendre(a, x) * legendre(b, x) * 2.0 / n;
      }
      CHECK(s == doctest::Approx(a == b ? 2.0 / (2 * a + 1) : 0.0).epsilon(1e-6).scale(1));
    }
  }
}

TEST_CASE("target enumeration") {
  const auto t = enumerate_targets(3, 15);
  CHECK(t.size() == 968);
  int last_degree = 0;
  for (const auto& s : t) {
    CHECK(s.total_degree() >= last_degree);
    last_degree = s.total_degree();
    CHECK(s.max_delay() <= 15);
    s.validate();
  }
  CHECK(t.front().to_string() == "0^1");
  CHECK(t[16].total_degree() == 2);
  CHECK(enumerate_targets(1, 4).size() == 5);
  CHECK(enumerate_targets(2, 2).size() == 3 + 3 + 3);
  CHECK_THROWS_AS(enumerate_targets(3, 15, 900), std::length_error);
  TargetSpec bad{{{1, 1}, {1, 2}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("build_target") {
  const std::vector<double> u{0.1, -0.2, 0.5, 0.9, -0.7};
  const TargetSpec s{{{0, 1}, {2, 2}}};
  const auto z = build_target(u, s, 2, 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(z(r) == doctest::Approx(u[static_cast<std::size_t>(2 + r)] * legendre(2, u[static_cast<std::size_t>(r)])));
  }
  CHECK_THROWS(build_target(u, s, 1, 3));
  CHECK_THROWS(build_target(u, s, 2, 4));
}

TEST_CASE("capacity of single targets") {
  const RealMatrix s = gaussian(1200, 4, 1);
  const RealMatrix s_train = s.topRows(1000), s_test = s.bottomRows(200);
  SUBCASE("exact linear target") {
    const RealVector w = (RealVector(4) << 1, -2, 0.5, 3).finished();
    const RealVector z = s * w;
    CHECK(capacity_of_target(s_train, s_test, z.head(1000), z.tail(200)) == doctest::Approx(1.0).epsilon(1e-12));
    const RealVector shifted = z.array() + 4.0;
    CHECK(capacity_of_target(s_train, s_test, shifted.head(1000), shifted.tail(200)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("independent target is near zero") {
    const RealMatrix z = gaussian(1200, 1, 99);
    const double c = capacity_of_target(s_train, s_test, z.col(0).head(1000), z.col(0).tail(200));
    CHECK(c >= 0.0);
    CHECK(c < 0.05);
  }
  SUBCASE("constant test target") {
    const RealVector z = RealVector::Ones(1200);
    CHECK(capacity_of_target(s_train, s_test, z.head(1000), z.tail(200)) == 0.0);
  }
  SUBCASE("half signal: squared correlation") {
    const RealMatrix noise = gaussian(1200, 1, 5);
    const RealVector z = s.col(0) + noise.col(0);
    const double c = capacity_of_target(s_train, s_test, z.head(1000), z.tail(200));
    CHECK(c == doctest::Approx(0.5).epsilon(0.25));
  }
  SUBCASE("evaluator agrees with the single-target path") {
    const RealMatrix z = gaussian(1200, 3, 6) + s.leftCols(3);
    const CapacityEvaluator ev(s_train, s_test);
    const RealVector c = ev.capacities(z.topRows(1000), z.bottomRows(200));
    for (int k = 0; k < 3; ++k) {
      CHECK(c(k) == doctest::Approx(capacity_of_target(s_train, s_test, z.col(k).head(1000), z.col(k).tail(200))));
    }
    CHECK(ev.train_rows() == 1000);
    CHECK(ev.test_rows() == 200);
  }
}

TEST_CASE("total IPC") {
  const std::size_t len = 20 + 1500 + 500;
  const auto u = draw_inputs(len, 12);
  CapacityOptions o;
  o.max_degree = 2;
  o.max_delay = 4;
  o.train_rows = 1500;
  o.test_rows = 500;
  o.surrogates = 100;

  SUBCASE("memoryless linear features carry u_n only") {
    RealMatrix s(2000, 1);
    for (Eigen::Index r = 0; r < 2000; ++r) s(r, 0) = u[static_cast<std::size_t>(20 + r)];
    o.threshold = 0.05;
    const auto rep = total_ipc(s, u, 20, o);
    REQUIRE(rep.per_target.size() == 1);
    CHECK(rep.per_target[0].spec.to_string() == "0^1");
    CHECK(rep.total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.per_order.at(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.evaluated == static_cast<int>(enumerate_targets(2, 4).size()));
  }
  SUBCASE("delay line features: capacity grows with memory") {
    RealMatrix s(2000, 5);
    for (Eigen::Index r = 0; r < 2000; ++r)
      for (int d = 0; d < 5; ++d) s(r, d) = u[static_cast<std::size_t>(20 + r - d)];
    o.threshold = 0.05;
    const auto full = total_ipc(s, u, 20, o);
    CHECK(full.total == doctest::Approx(5.0).epsilon(1e-6));
    const auto part = total_ipc(s.leftCols(3), u, 20, o);
    CHECK(part.total == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(full.total <= full.features + 1e-9);
  }
  SUBCASE("calibrated threshold suppresses spurious capacity") {
    const RealMatrix s = gaussian(2000, 6, 31);
    const auto rep = total_ipc(s, u, 20, o);
    CHECK(rep.threshold > 0.0);
    CHECK(rep.threshold < 0.1);
    CHECK(rep.per_target.size() <= static_cast<std::size_t>(0.05 * rep.evaluated) + 1);
    CHECK(rep.min_capacity >= 0.0);
    CHECK(rep.max_capacity <= 1.0);
    const auto again = total_ipc(s, u, 20, o);
    CHECK(again.threshold == rep.threshold);
    CHECK(again.total == rep.total);
  }
  SUBCASE("too few rows") {
    const RealMatrix s = gaussian(100, 2, 1);
    CHECK_THROWS_AS(total_ipc(s, u, 20, o), std::invalid_argument);
  }
}
