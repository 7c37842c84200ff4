#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "dicke/errors.hpp"
#include "dicke/operators.hpp"

using namespace dicke;

namespace {

// Independent oracle: exp(z a^dag - z* a) by scaling and squaring.
Mat displacement_by_exponential(cplx z, int n_max) {
  auto b = build_boson_ops(n_max);
  Mat gen = z * b.adag.entries - std::conj(z) * b.a.entries;
  return gen.exp();
}

double bessel_series(int q, double x) {
  double sum = 0.0;
  for (int m = 0; m < 30; ++m)
    sum += std::pow(-1.0, m) / (std::tgamma(m + 1.0) * std::tgamma(m + q + 1.0)) * std::pow(x / 2, 2 * m + q);
  return sum;
}

}  // namespace

TEST_CASE("single spin-1/2 collective operators") {
  auto ops = build_collective_ops(1);
  CHECK(ops.Sz.entries(0, 0).real() == doctest::Approx(-0.5));
  CHECK(ops.Sz.entries(1, 1).real() == doctest::Approx(0.5));
  CHECK(ops.Splus.entries(1, 0).real() == doctest::Approx(1.0));
  CHECK(ops.Sz.tag == BasisTag::dicke(1));
}

TEST_CASE("ladder amplitude for four spins") {
  CHECK(ladder_h(4, 1) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(build_collective_ops(4).Splus.entries(2, 1).real() == doctest::Approx(2.449489742783178));
}

TEST_CASE("su(2) commutators hold for N up to 32") {
  for (int N = 1; N <= 32; ++N) {
    auto o = build_collective_ops(N);
    const Mat& z = o.Sz.entries;
    const Mat& p = o.Splus.entries;
    const Mat& m = o.Sminus.entries;
    CHECK(max_abs(commutator(z, p) - p) < 1e-12);
    CHECK(max_abs(commutator(z, m) + m) < 1e-12);
    CHECK(max_abs(commutator(p, m) - 2.0 * z) < 1e-12 * N);
    // Casimir on the symmetric subspace
    const Mat x = o.Sx.entries;
    const Mat y = (p - m) / cplx(0, 2);
    const Mat cas = x * x + y * y + z * z;
    const double j = N / 2.0;
    CHECK(max_abs(cas - j * (j + 1) * Mat::Identity(N + 1, N + 1)) < 1e-10 * (1 + j * j));
  }
}

TEST_CASE("invalid ensemble and boson sizes are rejected") {
  CHECK_THROWS_AS(build_collective_ops(0), InvalidParameter);
  CHECK_THROWS_AS(build_collective_ops(-3), InvalidParameter);
  CHECK_THROWS_AS(build_boson_ops(0), InvalidParameter);
}

TEST_CASE("boson operators") {
  auto b1 = build_boson_ops(1);
  Mat a1(2, 2);
  a1 << 0, 1, 0, 0;
  CHECK(max_abs(b1.a.entries - a1) == 0.0);

  auto b = build_boson_ops(10);
  Mat comm = commutator(b.a.entries, b.adag.entries);
  CHECK(max_abs(comm.topLeftCorner(10, 10) - Mat::Identity(10, 10)) < 1e-14);
  CHECK(std::abs(comm(10, 10) - cplx(-10, 0)) < 1e-12);  // truncation edge
  auto ev = hermitian_eig(b.num);
  for (int n = 0; n <= 10; ++n) CHECK(ev.values(n) == doctest::Approx(n));
}

TEST_CASE("displacement matrix agrees with the matrix exponential") {
  CHECK(max_abs(displacement_matrix(0.0, 0.0, 12).entries - Mat::Identity(13, 13)) < 1e-15);
  CHECK(displacement_matrix(0.25, 0.0, 40).entries(0, 0).real() == doctest::Approx(std::exp(-0.03125)).epsilon(1e-14));
  CHECK(std::exp(-0.03125) == doctest::Approx(0.969233).epsilon(1e-6));

  const int n_max = 40, keep = n_max - 10;
  for (double beta : {0.05, 0.25, 0.49, 0.75, 1.0}) {
    for (double phase : {0.0, 0.7, -2.1}) {
      Mat ours = displacement_matrix(beta, phase, n_max).entries;
      Mat oracle = displacement_by_exponential(std::polar(beta, phase), n_max + 30).topLeftCorner(n_max + 1, n_max + 1);
      CHECK(max_abs(ours.topLeftCorner(keep + 1, keep + 1) - oracle.topLeftCorner(keep + 1, keep + 1)) < 1e-10);
    }
  }
}

TEST_CASE("displacement matrix is unitary away from the truncation edge") {
  const int n_max = 30, keep = 15;
  Mat D = displacement_matrix(0.49, 0.0, n_max).entries;
  Mat P = D.adjoint() * D;
  CHECK(max_abs(P.topLeftCorner(keep + 1, keep + 1) - Mat::Identity(keep + 1, keep + 1)) < 1e-8);
  CHECK_THROWS_AS(displacement_matrix(std::nan(""), 0.0, 5), InvalidParameter);
}

TEST_CASE("Bessel functions") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(1, 1.09) == doctest::Approx(bessel_series(1, 1.09)).epsilon(1e-13));
  CHECK(bessel_j(1, 1.09) == doctest::Approx(0.46797).epsilon(1e-5));
  for (int q = 0; q <= 40; ++q)
    for (double x : {1e-4, 0.005, 0.12, 0.18, 0.26, 1.09, 3.8317, 7.5, 20.0, 60.0}) {
      const double ref = std::cyl_bessel_j(static_cast<double>(q), x);
      CHECK(std::abs(bessel_j(q, x) - ref) < 1e-13 + 1e-11 * std::abs(ref));
      CHECK(bessel_j(-q, x) == doctest::Approx((q % 2 ? -1.0 : 1.0) * bessel_j(q, x)).epsilon(1e-15));
    }
  CHECK(std::abs(bessel_j(1, 3.831705970207512)) < 1e-14);
}

TEST_CASE("Jacobi-Anger partial sums converge") {
  const double eta = 1.09;
  for (double x : {0.0, 1.0, 2.0}) {
    const cplx exact = std::exp(cplx(0, eta * std::sin(x)));
    cplx sum = 0.0;
    double prev_err = 1e300;
    for (int Q = 0; Q <= 30; ++Q) {
      sum += bessel_j(Q, eta) * std::exp(cplx(0, Q * x));
      if (Q > 0) sum += bessel_j(-Q, eta) * std::exp(cplx(0, -Q * x));
      const double err = std::abs(sum - exact);
      if (Q >= static_cast<int>(std::ceil(eta)) + 5 && prev_err > 1e-15) CHECK(err <= prev_err * (1 + 1e-6) + 1e-14);
      prev_err = err;
    }
    CHECK(prev_err < 1e-12);
  }
}

TEST_CASE("associated Laguerre polynomials") {
  for (int s : {0, 1, 5})
    for (double x : {0.0, 0.3, 4.0}) CHECK(assoc_laguerre(0, s, x) == 1.0);
  for (double x : {0.0, 0.3, 4.0}) CHECK(assoc_laguerre(1, 0, x) == doctest::Approx(1 - x));
  const double x = 0.0625;
  CHECK(assoc_laguerre(2, 1, x) == doctest::Approx(3.0 - 3.0 * x + x * x / 2).epsilon(1e-15));
  CHECK(assoc_laguerre(2, 1, x) == doctest::Approx(2.814).epsilon(1e-3));
  for (int n = 0; n <= 20; ++n)
    for (int s = 0; s <= 10; ++s)
      for (double y : {0.0625, 0.2401, 1.0, 3.0})
        CHECK(assoc_laguerre(n, s, y) == doctest::Approx(std::assoc_laguerre(n, s, y)).epsilon(1e-11));
  CHECK_THROWS_AS(assoc_laguerre(-1, 0, 0.1), InvalidParameter);
  CHECK_THROWS_AS(assoc_laguerre(1, -1, 0.1), InvalidParameter);
}

TEST_CASE("Hermitian eigendecomposition") {
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  auto e = hermitian_eig(d);
  CHECK(e.values(0) == doctest::Approx(1));
  CHECK(e.values(1) == doctest::Approx(2));
  CHECK(e.values(2) == doctest::Approx(3));

  Mat px(2, 2);
  px << 0, 1, 1, 0;
  auto p = hermitian_eig(px);
  CHECK(p.values(0) == doctest::Approx(-1));
  CHECK(p.values(1) == doctest::Approx(1));
  // compare projectors, not vectors
  Mat minus(2, 1), plus(2, 1);
  minus << 1, -1;
  plus << 1, 1;
  minus /= std::sqrt(2.0);
  plus /= std::sqrt(2.0);
  CHECK(max_abs(p.vectors.col(0) * p.vectors.col(0).adjoint() - minus * minus.adjoint()) < 1e-14);
  CHECK(max_abs(p.vectors.col(1) * p.vectors.col(1).adjoint() - plus * plus.adjoint()) < 1e-14);

  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  Mat R(100, 100);
  for (int i = 0; i < 100; ++i)
    for (int k = 0; k < 100; ++k) R(i, k) = cplx(g(rng), g(rng));
  Mat H = R + R.adjoint();
  auto h = hermitian_eig(H);
  CHECK(max_abs(h.vectors * h.values.cast<cplx>().asDiagonal() * h.vectors.adjoint() - H) < 1e-9);
  CHECK(max_abs(h.vectors.adjoint() * h.vectors - Mat::Identity(100, 100)) < 1e-9);
  for (int i = 1; i < 100; ++i) CHECK(h.values(i) >= h.values(i - 1));

  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(bad), ContractViolation);
}

TEST_CASE("operator matrices check shape and Hermiticity") {
  CHECK_THROWS_AS(OperatorMatrix(BasisTag::fock(2), Mat::Identity(2, 2)), ContractViolation);
  Mat bad = Mat::Zero(3, 3);
  bad(0, 2) = 1.0;
  CHECK_THROWS_AS(OperatorMatrix(BasisTag::fock(2), bad, true), ContractViolation);
  auto tag = BasisTag::composite({BasisTag::dicke(2), BasisTag::fock(3)});
  CHECK(tag.dim() == 12);
}

TEST_CASE("composite index is a bijection") {
  auto idx = CompositeBasisIndex::dicke(4, 3, 5);
  CHECK(idx.dim() == 5 * 4 * 6);
  std::vector<int> seen(idx.dim(), 0);
  for (int k1 = 0; k1 <= 4; ++k1)
    for (int k2 = 0; k2 <= 3; ++k2)
      for (int n = 0; n <= 5; ++n) {
        const int f = idx.flat(k1, k2, n);
        CHECK(f == (k1 * 4 + k2) * 6 + n);
        auto t = idx.triple(f);
        CHECK(t[0] == k1);
        CHECK(t[1] == k2);
        CHECK(t[2] == n);
        ++seen[f];
      }
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("matrix exponential of a Hermitian generator") {
  Mat sx(2, 2);
  sx << 0, 1, 1, 0;
  const double t = 0.37;
  Mat U = expm_hermitian(sx, t);
  Mat ref(2, 2);
  ref << std::cos(t), cplx(0, -std::sin(t)), cplx(0, -std::sin(t)), std::cos(t);
  CHECK(max_abs(U - ref) < 1e-14);
}
