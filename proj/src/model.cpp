#include "dicke/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

void check_j(int j) {
  if (j != 1 && j != 2) throw InvalidParameter("ensemble index must be 1 or 2");
}

double dmn(double beta, int m, int n) {
  const int lo = std::min(m, n), s = std::abs(m - n);
  const double b = (m >= n) ? beta : -beta;
  return std::exp(-0.5 * beta * beta) * std::pow(b, s) *
         std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + s + 1.0))) *
         assoc_laguerre(lo, s, beta * beta);
}

}  // namespace

int SystemSpec::ensemble_dim(int j) const {
  check_j(j);
  return mode == Mode::finite_dicke ? N(j) + 1 : m_max + 1;
}

CompositeBasisIndex SystemSpec::index() const {
  return {ensemble_dim(1), ensemble_dim(2), n_max + 1};
}

void SystemSpec::validate() const {
  if (N1 < 1 || N2 < 1) throw InvalidParameter("ensemble sizes must be >= 1");
  if (!(omega_c > 0)) throw InvalidParameter("omega_c must be positive");
  for (int j : {1, 2}) {
    if (!(eps(j) > 0)) throw InvalidParameter("eps" + std::to_string(j) + " must be positive");
    const double b = beta(j);
    if (!(b >= 0 && b <= 1)) throw InvalidParameter("g" + std::to_string(j) + "/omega_c must lie in [0, 1]");
  }
  if (q0 == 0) throw InvalidParameter("q0 must be nonzero");
  if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
  if (mode == Mode::magnon_hp && m_max < 1) throw InvalidParameter("m_max must be >= 1");
}

double envelope_value(const DriveStep& step, double t) {
  if (step.envelope.kind == EnvelopeKind::abrupt) return 1.0;
  const double slack = 1e-9 * std::max(step.duration, 1e-30);
  if (t < step.t_start - slack || t > step.t_end() + slack)
    throw InvalidParameter("envelope evaluated outside its step interval");
  const double x = (t - (step.t_start + 0.5 * step.duration)) / step.envelope.sigma;
  return step.envelope.mu * std::exp(-0.5 * x * x);
}

double resonance_delta(int j, int k1, int k2, const SystemSpec& spec) {
  check_j(j);
  if (k1 < 0 || k1 > spec.N1 || k2 < 0 || k2 > spec.N2)
    throw InvalidParameter("excitation numbers out of range");
  const int kd = j == 1 ? k1 : k2;
  if (kd > spec.N(j) - 1) throw InvalidParameter("driven ensemble has no upward transition");
  const int ko = j == 1 ? k2 : k1;
  const int Nd = spec.N(j), No = spec.N(3 - j);
  const double gd = spec.g(j), go = spec.g(3 - j), wc = spec.omega_c;
  return spec.omega_q(j) + gd * gd / wc * (Nd - 2 * kd - 1) + gd * go / wc * (No - 2 * ko);
}

double rabi_rate(int j, int k, double eta, const SystemSpec& spec, int s, int n) {
  check_j(j);
  if (k < 0 || k > spec.N(j) - 1) throw InvalidParameter("rabi_rate needs 0 <= k <= N-1");
  if (n < 0 || n + s < 0) throw InvalidParameter("Fock indices out of range");
  return -0.5 * spec.eps(j) * bessel_j(spec.q0, eta) * ladder_h(spec.N(j), k) *
         dmn(spec.beta(j), n + s, n);
}

double magnon_resonance_delta(int j, int m1, int m2, const SystemSpec& spec) {
  check_j(j);
  if (m1 < 0 || m2 < 0) throw InvalidParameter("magnon numbers must be >= 0");
  const int md = j == 1 ? m1 : m2, mo = j == 1 ? m2 : m1;
  const double gd = spec.g(j), go = spec.g(3 - j), wc = spec.omega_c;
  return spec.omega_q(j) + gd * gd / wc * (2 * spec.s(j) - 2 * md - 1) +
         2 * gd * go / wc * (spec.s(3 - j) - mo);
}

double magnon_rabi_rate(int j, int m, double eta, const SystemSpec& spec) {
  check_j(j);
  if (m < 0) throw InvalidParameter("magnon number must be >= 0");
  const double beta = spec.beta(j);
  return -0.5 * spec.eps(j) * bessel_j(spec.q0, eta) * std::sqrt(2 * spec.s(j) * (m + 1)) *
         std::exp(-0.5 * beta * beta);
}

double transition_delta(int j, int k1, int k2, const SystemSpec& spec) {
  return spec.mode == Mode::finite_dicke ? resonance_delta(j, k1, k2, spec)
                                         : magnon_resonance_delta(j, k1, k2, spec);
}

double transition_rate(int j, int k, double eta, const SystemSpec& spec) {
  return spec.mode == Mode::finite_dicke ? rabi_rate(j, k, eta, spec)
                                         : magnon_rabi_rate(j, k, eta, spec);
}

double drive_frequency(double delta, const SystemSpec& spec) { return -delta / spec.q0; }

// ---------------------------------------------------------------------------

namespace {

// States are stored back to back; each one is an nf x (d1*d2) column-major block.
void apply_blocks(const RotatingModel& m, int j, const cplx* x, cplx* y, Eigen::Index nstates, cplx scale,
                  Mat& up, Mat& dn) {
  const int nf = m.idx.nf, d1 = m.idx.d1, d2 = m.idx.d2, cols = d1 * d2;
  const Eigen::Index total = cols * nstates;
  Eigen::Map<const Mat> X(x, nf, total);
  Eigen::Map<Mat> Y(y, nf, total);
  const RMat& Dj = m.D(j);
  const RVec& hj = m.h(j);
  const cplx pre = scale * m.c(j);
  up.resize(nf, total);
  dn.resize(nf, total);
  up.noalias() = Dj * X;
  dn.noalias() = Dj.transpose() * X;
  for (Eigen::Index st = 0; st < nstates; ++st) {
    const Eigen::Index off = st * cols;
    if (j == 1) {
      for (int k = 0; k + 1 < d1; ++k) {
        const cplx a = pre * hj(k);
        Y.middleCols(off + (k + 1) * d2, d2) += a * up.middleCols(off + k * d2, d2);
        Y.middleCols(off + k * d2, d2) += a * dn.middleCols(off + (k + 1) * d2, d2);
      }
    } else {
      for (int k1 = 0; k1 < d1; ++k1)
        for (int k = 0; k + 1 < d2; ++k) {
          const cplx a = pre * hj(k);
          const Eigen::Index base = off + k1 * d2;
          Y.col(base + k + 1) += a * up.col(base + k);
          Y.col(base + k) += a * dn.col(base + k + 1);
        }
    }
  }
}

}  // namespace

void RotatingModel::apply_coupling(int j, const Vec& x, Vec& y, cplx scale) const {
  Mat up, dn;
  apply_blocks(*this, j, x.data(), y.data(), 1, scale, up, dn);
}

void RotatingModel::apply_coupling(int j, const Mat& X, Mat& Y, cplx scale, Mat& up, Mat& dn) const {
  if (X.rows() != dim() || Y.rows() != dim() || X.cols() != Y.cols())
    throw ContractViolation("apply_coupling shape mismatch");
  apply_blocks(*this, j, X.data(), Y.data(), X.cols(), scale, up, dn);
}

void RotatingModel::apply_coupling(int j, const Mat& X, Mat& Y, cplx scale) const {
  if (X.rows() != dim() || Y.rows() != dim() || X.cols() != Y.cols())
    throw ContractViolation("apply_coupling shape mismatch");
  Mat up, dn;
  apply_blocks(*this, j, X.data(), Y.data(), X.cols(), scale, up, dn);
}

Mat RotatingModel::dense_raising(int j) const {
  const int dj = j == 1 ? idx.d1 : idx.d2;
  Mat L = Mat::Zero(dj, dj);
  for (int k = 0; k + 1 < dj; ++k) L(k + 1, k) = h(j)(k);
  const Mat Dc = D(j).cast<cplx>();
  const Mat I1 = Mat::Identity(idx.d1, idx.d1), I2 = Mat::Identity(idx.d2, idx.d2);
  return j == 1 ? kron(L, kron(I2, Dc)) : kron(I1, kron(L, Dc));
}

Mat RotatingModel::dense_coupling(int j) const {
  Mat R = dense_raising(j);
  return c(j) * (R + R.adjoint());
}

RotatingModel build_rotating_model(const SystemSpec& spec) {
  spec.validate();
  RotatingModel m;
  m.mode = spec.mode;
  m.idx = spec.index();
  m.omega_c = spec.omega_c;
  const int d1 = m.idx.d1, d2 = m.idx.d2, nf = m.idx.nf, dim = m.idx.dim();
  const double wc = spec.omega_c;
  const double wq1 = spec.omega_q1 / wc, wq2 = spec.omega_q2 / wc;
  const double b1 = spec.beta(1), b2 = spec.beta(2);
  m.E.resize(dim);
  m.p1.resize(dim);
  m.p2.resize(dim);
  for (int k1 = 0; k1 < d1; ++k1)
    for (int k2 = 0; k2 < d2; ++k2) {
      double F, z1, z2;
      if (spec.mode == Mode::finite_dicke) {
        z1 = k1 - 0.5 * spec.N1;
        z2 = k2 - 0.5 * spec.N2;
        F = wq1 * z1 + wq2 * z2 - (b1 * z1 + b2 * z2) * (b1 * z1 + b2 * z2);
      } else {
        const double s1 = spec.s(1), s2 = spec.s(2);
        z1 = k1 - s1;
        z2 = k2 - s2;
        F = wq1 * k1 + wq2 * k2 + b1 * b1 * (2 * s1 * k1 - double(k1) * k1) +
            b2 * b2 * (2 * s2 * k2 - double(k2) * k2) +
            2 * b1 * b2 * (s2 * k1 + s1 * k2 - double(k1) * k2);
      }
      for (int n = 0; n < nf; ++n) {
        const int a = m.idx.flat(k1, k2, n);
        m.E(a) = n + F;
        m.p1(a) = z1;
        m.p2(a) = z2;
      }
    }
  for (int j : {1, 2}) {
    const int dj = j == 1 ? d1 : d2;
    RVec h(std::max(dj - 1, 0));
    for (int k = 0; k + 1 < dj; ++k)
      h(k) = spec.mode == Mode::finite_dicke ? ladder_h(spec.N(j), k)
                                             : std::sqrt(2 * spec.s(j) * (k + 1));
    (j == 1 ? m.h1 : m.h2) = h;
    (j == 1 ? m.c1 : m.c2) = -0.5 * spec.eps(j) / wc;
    (j == 1 ? m.D1 : m.D2) = displacement_real(spec.beta(j), spec.n_max);
  }
  return m;
}

namespace {

double env_for(const DriveStep& step, int j, double t) {
  return step.driven == j ? envelope_value(step, t) : 1.0;
}

}  // namespace

OperatorMatrix build_transformed_hamiltonian(const SystemSpec& spec, const DriveStep& step, double t) {
  if (spec.mode != Mode::finite_dicke) throw WrongMode("transformed Hamiltonian needs finite_dicke mode");
  RotatingModel m = build_rotating_model(spec);
  const double w = step.omega / spec.omega_c;
  RVec diag = m.E;
  for (int j : {1, 2}) diag += step.eta(j) * w * std::cos(step.omega * t) * m.p(j);
  Mat H = diag.cast<cplx>().asDiagonal();
  for (int j : {1, 2}) H += env_for(step, j, t) * m.dense_coupling(j);
  H *= spec.omega_c;
  H = 0.5 * (H + H.adjoint()).eval();
  auto tag = BasisTag::composite({BasisTag::dicke(spec.N1), BasisTag::dicke(spec.N2), BasisTag::fock(spec.n_max)});
  return {tag, H, true};
}

Mat undriven_hamiltonian(const SystemSpec& spec) {
  RotatingModel m = build_rotating_model(spec);
  Mat H = m.E.cast<cplx>().asDiagonal();
  H += m.dense_coupling(1) + m.dense_coupling(2);
  return spec.omega_c * H;
}

Mat interaction_hamiltonian(const RotatingModel& m, const DriveStep& step, double t) {
  const double tau = m.omega_c * t;
  const double sn = std::sin(step.omega * t);
  Vec ph(m.dim());
  for (int a = 0; a < m.dim(); ++a)
    ph(a) = std::polar(1.0, m.E(a) * tau + sn * (step.eta1 * m.p1(a) + step.eta2 * m.p2(a)));
  Mat V = env_for(step, 1, t) * m.dense_coupling(1) + env_for(step, 2, t) * m.dense_coupling(2);
  return m.omega_c * (ph.asDiagonal() * V * ph.conjugate().asDiagonal());
}

OperatorMatrix build_magnon_hamiltonian(const SystemSpec& spec, const DriveStep& step, double t) {
  if (spec.mode != Mode::magnon_hp) throw WrongMode("magnon Hamiltonian needs magnon_hp mode");
  RotatingModel m = build_rotating_model(spec);
  auto tag = BasisTag::composite({BasisTag::fock(spec.m_max), BasisTag::fock(spec.m_max), BasisTag::fock(spec.n_max)});
  Mat H = interaction_hamiltonian(m, step, t);
  H = 0.5 * (H + H.adjoint()).eval();
  // the warning threshold <m^dag m>/2s > 0.1 is checked on states by the propagators
  return {tag, H, true};
}

OperatorMatrix build_effective_hamiltonian(int j, int k1p, int k2p, const SystemSpec& spec, double eta) {
  check_j(j);
  const auto idx = spec.index();
  const int kd = j == 1 ? k1p : k2p;
  const double G = transition_rate(j, kd, eta, spec);
  const int a = idx.flat(k1p, k2p, 0);
  const int b = j == 1 ? idx.flat(k1p + 1, k2p, 0) : idx.flat(k1p, k2p + 1, 0);
  Mat H = Mat::Zero(idx.dim(), idx.dim());
  H(b, a) = G;
  H(a, b) = G;
  std::vector<BasisTag> f;
  for (int jj : {1, 2})
    f.push_back(spec.mode == Mode::finite_dicke ? BasisTag::dicke(spec.N(jj)) : BasisTag::fock(spec.m_max));
  f.push_back(BasisTag::fock(spec.n_max));
  return {BasisTag::composite(f), H, true};
}

Mat transformation_U(const SystemSpec& spec) {
  if (spec.mode != Mode::finite_dicke) throw WrongMode("the frame map U is defined for finite_dicke mode");
  spec.validate();
  const double r = std::numbers::pi / std::sqrt(2.0);
  auto c1 = build_collective_ops(spec.N1), c2 = build_collective_ops(spec.N2);
  auto bos = build_boson_ops(spec.n_max);
  // exp(i r (Sx+Sz)) = exp(-i H) with H = -r (Sx+Sz)
  Mat R1 = expm_hermitian(-r * (c1.Sx.entries + c1.Sz.entries), 1.0);
  Mat R2 = expm_hermitian(-r * (c2.Sx.entries + c2.Sz.entries), 1.0);
  const Mat If = Mat::Identity(spec.n_max + 1, spec.n_max + 1);
  const Mat I1 = Mat::Identity(spec.N1 + 1, spec.N1 + 1), I2 = Mat::Identity(spec.N2 + 1, spec.N2 + 1);
  Mat rot = kron(R1, kron(R2, If));
  // exp[sum_j beta_j (a - a^dag) Sx_j] = exp(-i H) with H = i * generator
  const Mat q = bos.a.entries - bos.adag.entries;
  Mat gen = spec.beta(1) * kron(c1.Sx.entries, kron(I2, q)) + spec.beta(2) * kron(I1, kron(c2.Sx.entries, q));
  Mat H = cplx(0, 1) * gen;
  H = 0.5 * (H + H.adjoint()).eval();
  Mat pol = expm_hermitian(H, 1.0);
  return pol * rot;
}

LabState lab_frame_state(int k1, int k2, const SystemSpec& spec) {
  if (spec.mode != Mode::finite_dicke) throw WrongMode("lab_frame_state needs finite_dicke mode");
  const auto idx = spec.index();
  LabState out;
  out.U = transformation_U(spec);
  out.amplitudes = out.U.col(idx.flat(k1, k2, 0));
  out.xi = (0.5 * spec.N1 - k1) * spec.beta(1) + (0.5 * spec.N2 - k2) * spec.beta(2);
  return out;
}

double SidebandEntry::resonant_omega() const {
  return q == 0 ? std::numeric_limits<double>::quiet_NaN() : -offset / q;
}

std::vector<SidebandEntry> enumerate_sidebands(const SystemSpec& spec, int k1, int k2, int s_max,
                                               int q_max, double eta1, double eta2) {
  std::vector<SidebandEntry> out;
  for (int j : {1, 2}) {
    const int kd = j == 1 ? k1 : k2;
    const bool finite = spec.mode == Mode::finite_dicke;
    if (finite && kd >= spec.N(j)) continue;
    const double delta = transition_delta(j, k1, k2, spec);
    const double h = finite ? ladder_h(spec.N(j), kd) : std::sqrt(2 * spec.s(j) * (kd + 1));
    const double eta = j == 1 ? eta1 : eta2;
    for (int s = -s_max; s <= s_max; ++s) {
      const int n = s >= 0 ? 0 : -s, np = s >= 0 ? s : 0;
      const double d = dmn(spec.beta(j), np, n);
      for (int q = -q_max; q <= q_max; ++q) {
        SidebandEntry e;
        e.j = j;
        e.k1 = k1;
        e.k2 = k2;
        e.s = s;
        e.q = q;
        e.offset = delta + s * spec.omega_c;
        e.rate = -0.5 * spec.eps(j) * bessel_j(q, eta) * h * d;
        out.push_back(e);
      }
    }
  }
  return out;
}

}  // namespace dicke
