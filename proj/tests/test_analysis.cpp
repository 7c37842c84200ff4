#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dicke/analysis.hpp"
#include "dicke/errors.hpp"
#include "dicke/presets.hpp"

using namespace dicke;
using presets::finite_system;

namespace {

constexpr double pi = std::numbers::pi;

Vec unit(int n, int i) { return Vec::Unit(n, i); }

}  // namespace

TEST_CASE("fidelity basics") {
  Vec a(3), b(3);
  a << 1, 0, 0;
  b << 0, cplx(0, 1), 0;
  CHECK(fidelity(a, a) == 1.0);
  CHECK(fidelity(a, b) == 0.0);
  Vec c = (a + b) / std::sqrt(2.0);
  CHECK(fidelity(a, c) == doctest::Approx(0.5));
  CHECK(fidelity(a, Vec(std::polar(1.0, 0.7) * c)) == doctest::Approx(0.5));
  CHECK(fidelity(c, a) == doctest::Approx(fidelity(a, c)));
  CHECK_THROWS_AS(fidelity(a, Vec(Vec::Zero(4))), ContractViolation);

  QuantumState qa{a, Frame::transformed}, ql{a, Frame::lab};
  CHECK_THROWS_AS(fidelity(qa, ql), ContractViolation);
  DensityMatrix rho{c * c.adjoint(), Frame::transformed};
  CHECK(fidelity(qa, rho) == doctest::Approx(0.5));
  CHECK_THROWS_AS(fidelity(qa, DensityMatrix{rho.entries, Frame::lab}), ContractViolation);
}

TEST_CASE("time-averaged population") {
  Trajectory still;
  for (int i = 0; i <= 10; ++i) {
    still.times.push_back(i * 0.1);
    still.states.push_back(unit(2, 0));
  }
  CHECK(time_averaged_population(still, unit(2, 0)) == doctest::Approx(1.0));
  CHECK(time_averaged_population(still, unit(2, 1)) == 0.0);

  Trajectory rabi;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * pi * i / (n - 1);
    Vec v(2);
    v << std::cos(t), cplx(0, -std::sin(t));
    rabi.times.push_back(t);
    rabi.states.push_back(v);
  }
  CHECK(time_averaged_population(rabi, unit(2, 0)) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(time_averaged_population(Trajectory{}, unit(2, 0)), InvalidParameter);
}

TEST_CASE("first minimum of a sampled oscillation") {
  const double P = 0.37;
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(i * 0.01);
    y.push_back(std::pow(std::cos(pi * t.back() / P), 2));
  }
  CHECK(first_minimum_time(t, y) == doctest::Approx(P / 2).epsilon(1e-3));

  // fast small ripple on top of the slow oscillation
  std::vector<double> tr, yr;
  for (int i = 0; i <= 4000; ++i) {
    tr.push_back(i * 0.0005);
    yr.push_back(std::pow(std::cos(pi * tr.back() / P), 2) + 0.01 * std::sin(2 * pi * tr.back() / 0.004));
  }
  CHECK(first_minimum_time(tr, yr) == doctest::Approx(P / 2).epsilon(2e-3));
  std::vector<double> rising{0, 1, 2, 3}, tt{0, 1, 2, 3};
  CHECK(std::isnan(first_minimum_time(tt, rising)));
  CHECK_THROWS_AS(first_minimum_time(tt, {1.0}), ContractViolation);
}

TEST_CASE("cat states") {
  const int n_max = 30;
  for (double alpha : {0.2, 0.48, 1.3}) {
    Vec p = cat_state(alpha, n_max, +1), m = cat_state(alpha, n_max, -1);
    CHECK(p.norm() == doctest::Approx(1.0));
    CHECK(m.norm() == doctest::Approx(1.0));
    CHECK(std::abs(p.dot(m)) < 1e-15);
    for (int n = 1; n <= n_max; n += 2) CHECK(p(n) == cplx(0));
    for (int n = 0; n <= n_max; n += 2) CHECK(m(n) == cplx(0));
  }
  Vec zero = cat_state(0.0, 5, +1);
  CHECK(zero(0) == cplx(1));
  CHECK(cat_state(0.0, 5, -1).norm() == 0.0);
}

TEST_CASE("cat projection of a coherent-state superposition") {
  // |e1>|alpha> + |e2>|-alpha> built directly from Poisson amplitudes
  const double alpha = 0.48;
  const int n_max = 20, nf = n_max + 1;
  Vec coh_p(nf), coh_m(nf);
  for (int n = 0; n < nf; ++n) {
    coh_p(n) = std::exp(-alpha * alpha / 2) * std::pow(alpha, n) / std::sqrt(std::tgamma(n + 1.0));
    coh_m(n) = (n % 2 ? -1.0 : 1.0) * coh_p(n);
  }
  Vec state = (kron(unit(2, 0), coh_p) + kron(unit(2, 1), coh_m)) / std::sqrt(2.0);
  auto r = cat_projection(state, 2, alpha);
  const double e = std::exp(-2 * alpha * alpha);
  CHECK(r.p_plus == doctest::Approx((1 + e) / 2).epsilon(1e-12));
  CHECK(r.p_minus == doctest::Approx((1 - e) / 2).epsilon(1e-12));
  CHECK(std::abs(r.p_residual) < 1e-12);
  CHECK(std::round(r.p_plus * 1e4) / 1e4 == doctest::Approx(0.8154));
  CHECK(std::round(r.p_minus * 1e4) / 1e4 == doctest::Approx(0.1846));
  Vec dplus(2), dminus(2);
  dplus << 1, 1;
  dminus << 1, -1;
  CHECK(fidelity(Vec(dplus / std::sqrt(2.0)), r.post_plus) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(Vec(dminus / std::sqrt(2.0)), r.post_minus) == doctest::Approx(1.0).epsilon(1e-12));

  auto z = cat_projection(kron(unit(2, 0), unit(nf, 0)), 2, 0.0);
  CHECK(z.p_plus == doctest::Approx(1.0));
  CHECK(z.p_minus == 0.0);

  CHECK_THROWS_AS(cat_projection(state, 2, 4.5), TruncationError);
  CHECK_THROWS_AS(cat_projection(state, 5, alpha), ContractViolation);
}

TEST_CASE("cat projection of the ideal entangled lab-frame state") {
  auto s = finite_system(15);
  auto a = lab_frame_state(4, 0, s), b = lab_frame_state(0, 4, s);
  CHECK(a.xi == doctest::Approx(0.48));
  CHECK(b.xi == doctest::Approx(-0.48));
  Vec state = (a.amplitudes + b.amplitudes) / std::sqrt(2.0);
  const int ens = (s.N1 + 1) * (s.N2 + 1), nf = s.n_max + 1;
  auto r = cat_projection(state, ens, 0.48);
  const double e = std::exp(-2 * 0.48 * 0.48);
  CHECK(std::abs(r.p_plus - (1 + e) / 2) < 1e-6);
  CHECK(std::abs(r.p_minus - (1 - e) / 2) < 1e-6);

  // ensemble factors read off the vacuum component of each product state
  auto factor = [&](const LabState& st) {
    Vec f(ens);
    for (int k = 0; k < ens; ++k) f(k) = st.amplitudes(k * nf) / std::exp(-st.xi * st.xi / 2);
    return f;
  };
  Vec ea = factor(a), eb = factor(b);
  CHECK(ea.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(ea.dot(eb)) < 1e-12);
  CHECK(fidelity(Vec((ea + eb) / std::sqrt(2.0)), r.post_plus) > 0.999);
  CHECK(fidelity(Vec((ea - eb) / std::sqrt(2.0)), r.post_minus) > 0.999);
}

TEST_CASE("sweep maps") {
  auto s = finite_system(4);
  const Vec init = basis_state(s, 1, 1, 0);
  SweepSettings set;
  set.duration = 0.02e-6;
  set.samples = 41;

  SUBCASE("single cell equals a direct run") {
    const double w = 4.5 * s.omega_c;
    auto g = sweep_map(s, {w}, {1.09}, init, set);
    REQUIRE(g.result.rows() == 1);
    REQUIRE(g.result.cols() == 1);
    DriveStep d;
    d.omega = w;
    d.eta1 = d.eta2 = 1.09;
    std::vector<double> times;
    for (int i = 0; i < set.samples; ++i) times.push_back(set.duration * i / (set.samples - 1));
    auto tr = propagate_rotating(build_rotating_model(s), d, init, times, default_dt(s.omega_c, w));
    CHECK(g.result(0, 0) == time_averaged_population(tr, init));
    // far from every resonance nothing moves
    CHECK(g.result(0, 0) > 0.95);
    CHECK(g.failures == 0);
  }

  SUBCASE("worker count does not change results") {
    std::vector<double> ws{3.3025 * s.omega_c, 4.0 * s.omega_c}, es{0.5, 1.09, 2.0};
    auto one = sweep_map(s, ws, es, init, set);
    set.workers = 4;
    auto four = sweep_map(s, ws, es, init, set);
    CHECK((one.result - four.result).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(sweep_map(s, {}, {1.0}, init, set), InvalidParameter);
    set.duration = 0.0;
    CHECK_THROWS_AS(sweep_map(s, {s.omega_c}, {1.0}, init, set), InvalidParameter);
  }
}

TEST_CASE("population stays trapped at a Bessel zero") {
  auto s = finite_system(4);
  const Vec init = basis_state(s, 1, 1, 0);
  const double w = drive_frequency(resonance_delta(1, 0, 1, s), s);
  SweepSettings set;
  set.duration = 0.1e-6;
  set.samples = 101;
  auto g = sweep_map(s, {w}, {1.09, 3.831705970207512}, init, set);
  CHECK(g.result(0, 0) < 0.8);   // resonant transfer
  CHECK(g.result(0, 1) > 0.95);  // frozen
}
