#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracle_support.hpp"
#include "wishrisk/cone.hpp"
#include "wishrisk/io.hpp"
#include "wishrisk/types.hpp"

using namespace wishrisk;
using wishrisk_test::all_partitions;
using wishrisk_test::random_pd;

namespace {
const std::complex<double> kI(0.0, 1.0);
}

TEST_CASE("log_det of small examples") {
  RealMatrix a(2, 2);
  a << 2, 1, 1, 2;
  CHECK(log_det(a) == doctest::Approx(std::log(3.0)).epsilon(1e-14));

  ComplexMatrix b(2, 2);
  b << 2.0 + 0.0 * kI, kI, -kI, 2.0 + 0.0 * kI;
  CHECK(log_det(b) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("log_det rejects indefinite input") {
  RealMatrix a(2, 2);
  a << 1, 2, 2, 1;
  CHECK_THROWS_AS(log_det(a), NumericalError);
  CHECK_FALSE(is_pd(a));
}

TEST_CASE("real_inner matches Re tr(xy)") {
  std::mt19937_64 rng(41);
  const auto x = random_pd<std::complex<double>>(3, rng);
  const auto y = random_pd<std::complex<double>>(3, rng);
  const std::complex<double> t = (x * y).trace();
  CHECK(std::abs(t.imag()) < 1e-12 * std::abs(t.real()));
  CHECK(real_inner(x, y) == doctest::Approx(t.real()).epsilon(1e-13));
}

TEST_CASE("schur complement satisfies the determinant factorization") {
  std::mt19937_64 rng(7);
  for (int n : {2, 3, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto xr = random_pd<double>(n, rng);
      const auto xc = random_pd<std::complex<double>>(n, rng);
      for (int split = 1; split < n; ++split) {
        const auto sr = schur_complement(xr, split);
        CHECK(is_pd(sr));
        const double rhs_r =
            log_det(sr) +
            log_det(RealMatrix(xr.bottomRightCorner(n - split, n - split)));
        CHECK(std::abs(log_det(xr) - rhs_r) <= 1e-10);

        const auto sc = schur_complement(xc, split);
        CHECK(is_pd(sc));
        const double rhs_c =
            log_det(sc) +
            log_det(ComplexMatrix(xc.bottomRightCorner(n - split, n - split)));
        CHECK(std::abs(log_det(xc) - rhs_c) <= 1e-10);
      }
    }
  }
}

TEST_CASE("block coordinates of a 2x2 example") {
  RealMatrix xi(2, 2);
  xi << 2, 1, 1, 2;
  const Partition p = make_partition(make_cone_spec(1, 2), {1, 1});
  const auto phi = xi_to_phi(xi, p);
  REQUIRE(phi.zeta1.rows() == 1);
  CHECK(phi.zeta1(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  REQUIRE(phi.xi_half.size() == 1);
  CHECK(phi.xi_half[0](0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(phi.xi_0.size() == 1);
  CHECK(phi.xi_0[0](0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(&phi.xi0_block(1) == &phi.zeta1);
  CHECK(phi.xi0_block(2)(0, 0) == doctest::Approx(2.0));
}

template <typename Scalar>
static void roundtrip_case(int d) {
  std::mt19937_64 rng(1234 + d);
  const int reps = 100;
  for (int r = 1; r <= 4; ++r) {
    const ConeSpec cone = make_cone_spec(d, r);
    for (const auto& blocks : all_partitions(r)) {
      const Partition p = make_partition(cone, blocks);
      for (int rep = 0; rep < reps; ++rep) {
        const auto xi = random_pd<Scalar>(r, rng);
        const auto phi = xi_to_phi(xi, p);

        // every diagonal coordinate block is positive definite
        double block_logdet = 0.0;
        for (int i = 1; i <= p.h(); ++i) {
          CHECK(is_pd(phi.xi0_block(i)));
          block_logdet += log_det(phi.xi0_block(i));
        }
        CHECK(std::abs(block_logdet - log_det(xi)) <= 1e-10);

        const auto back = phi_to_xi(phi, p);
        const double scale = xi.cwiseAbs().maxCoeff();
        CHECK((back - xi).cwiseAbs().maxCoeff() <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("coordinate round trips across ranks and partitions") {
  roundtrip_case<double>(1);
  roundtrip_case<std::complex<double>>(2);
}

TEST_CASE("hermitian validation") {
  RealMatrix a(2, 2);
  a << 1, 2, 0, 1;
  CHECK_THROWS_AS(check_hermitian(a), std::invalid_argument);
  CHECK_THROWS_AS(ConeElement<double>{a}, NumericalError);

  RealMatrix good(2, 2);
  good << 2, 1, 1, 2;
  const ConeElement<double> e(good);
  CHECK(e.rank() == 2);

  RealMatrix indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(ConeElement<double>{indef}, NumericalError);
}

TEST_CASE("dimension mismatches are rejected") {
  const Partition p = make_partition(make_cone_spec(1, 3), {1, 2});
  RealMatrix xi(2, 2);
  xi << 2, 1, 1, 2;
  CHECK_THROWS_AS(xi_to_phi(xi, p), std::invalid_argument);

  PhiParam<double> phi;
  phi.zeta1 = RealMatrix::Identity(2, 2);
  CHECK_THROWS_AS(phi_to_xi(phi, p), std::invalid_argument);

  CHECK_THROWS_AS(schur_complement(xi, 0), std::invalid_argument);
  CHECK_THROWS_AS(schur_complement(xi, 2), std::invalid_argument);
}

TEST_CASE("json round trips") {
  std::mt19937_64 rng(99);
  const auto xr = random_pd<double>(3, rng);
  const auto jr = matrix_to_json(xr);
  const auto br = matrix_from_json<double>(jr);
  CHECK((br - xr).cwiseAbs().maxCoeff() == 0.0);

  const auto xc = random_pd<std::complex<double>>(3, rng);
  const auto jc = matrix_to_json(xc);
  const auto bc = matrix_from_json<std::complex<double>>(jc);
  CHECK((bc - xc).cwiseAbs().maxCoeff() == 0.0);

  // plain numbers are accepted as real entries of a complex matrix
  const auto mixed = nlohmann::json::parse("[[2, [0, 1]], [[0, -1], 2]]");
  const auto m = matrix_from_json<std::complex<double>>(mixed);
  CHECK(m(0, 0) == std::complex<double>(2, 0));
  CHECK(m(0, 1) == std::complex<double>(0, 1));
  CHECK(m(1, 0) == std::complex<double>(0, -1));
}

TEST_CASE("malformed json matrices are rejected") {
  CHECK_THROWS_AS(matrix_from_json<double>(nlohmann::json::parse("[]")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      matrix_from_json<double>(nlohmann::json::parse("[[1, 2], [3]]")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      matrix_from_json<double>(nlohmann::json::parse("[[1, [2, 0]]]")),
      std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json<double>(nlohmann::json::parse("3.5")),
                  std::invalid_argument);
}
