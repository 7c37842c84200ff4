#include "dicke/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidParameter("time grid is empty");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] >= t_grid[i - 1])) throw InvalidParameter("time grid must be ascending");
}

bool all_finite(const Mat& X) { return X.allFinite(); }

}  // namespace

Trajectory propagate_unitary(const HamiltonianProvider& H, const Vec& psi0,
                             const std::vector<double>& t_grid, double dt_max) {
  check_grid(t_grid);
  if (!(dt_max > 0)) throw InvalidParameter("dt_max must be positive");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw ContractViolation("initial state is not normalized");
  Trajectory out;
  Vec psi = psi0;
  double t = t_grid.front();
  for (double target : t_grid) {
    const double span = target - t;
    if (span > 0) {
      const int n = static_cast<int>(std::ceil(span / dt_max - 1e-12));
      const double dt = span / n;
      for (int i = 0; i < n; ++i) {
        psi = expm_hermitian(H(t + (i + 0.5) * dt), dt) * psi;
        if (!psi.allFinite()) throw IntegrationFailure("non-finite amplitudes", t + (i + 1) * dt);
      }
      t = target;
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9) throw IntegrationFailure("norm drift above 1e-9", t);
    out.times.push_back(target);
    out.states.push_back(psi);
  }
  return out;
}

double default_dt(double omega_c, double drive_omega) {
  double dt = 0.1 / omega_c;
  if (drive_omega > 0) dt = std::min(dt, 2.0 * std::numbers::pi / drive_omega / 8.0);
  return dt;
}

Vec frame_phases(const RotatingModel& m, const DriveStep& step, double t) {
  const double tau = m.omega_c * t;
  const double sn = std::sin(step.omega * t);
  Vec ph(m.dim());
  for (int a = 0; a < m.dim(); ++a)
    ph(a) = std::polar(1.0, -(m.E(a) * tau + sn * (step.eta1 * m.p1(a) + step.eta2 * m.p2(a))));
  return ph;
}

namespace {

struct GaussPoint {
  Vec ph;  // exp(+i theta)
  double e1, e2;
};

GaussPoint gauss_point(const RotatingModel& m, const DriveStep& step, double t) {
  GaussPoint g{frame_phases(m, step, t).conjugate(), 1.0, 1.0};
  if (step.driven == 1) g.e1 = envelope_value(step, t);
  if (step.driven == 2) g.e2 = envelope_value(step, t);
  return g;
}

struct Workspace {
  Mat term, next, Z, W, up, dn;
};

// Y = sum_i w_i H_I(t_i) X
void apply_combination(const RotatingModel& m, const GaussPoint& g1, double w1, const GaussPoint& g2,
                       double w2, const Mat& X, Mat& Y, Workspace& ws) {
  Y.setZero(X.rows(), X.cols());
  ws.Z.resize(X.rows(), X.cols());
  ws.W.resize(X.rows(), X.cols());
  for (auto [g, w] : {std::pair{&g1, w1}, std::pair{&g2, w2}}) {
    ws.Z = X.array().colwise() * g->ph.conjugate().array();
    ws.W.setZero();
    m.apply_coupling(1, ws.Z, ws.W, g->e1, ws.up, ws.dn);
    m.apply_coupling(2, ws.Z, ws.W, g->e2, ws.up, ws.dn);
    Y.array() += w * (ws.W.array().colwise() * g->ph.array());
  }
}

void taylor_expv(const RotatingModel& m, const GaussPoint& g1, double w1, const GaussPoint& g2,
                 double w2, double h, Mat& X, Workspace& ws) {
  ws.term = X;
  const double scale = X.norm();
  for (int k = 1; k <= 30; ++k) {
    apply_combination(m, g1, w1, g2, w2, ws.term, ws.next, ws);
    ws.term = ws.next * cplx(0.0, -h / k);
    X += ws.term;
    if (ws.term.norm() <= 1e-17 * scale) return;
  }
  throw IntegrationFailure("Taylor series did not converge; reduce dt_max", 0.0);
}

}  // namespace

void advance_rotating(const RotatingModel& m, const DriveStep& step, Mat& X, double t0, double t1,
                      double dt_max) {
  if (t1 < t0) throw InvalidParameter("advance_rotating needs t1 >= t0");
  if (!(dt_max > 0)) throw InvalidParameter("dt_max must be positive");
  if (t1 == t0) return;
  static const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
  static const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
  static const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  static const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const int n = static_cast<int>(std::ceil((t1 - t0) / dt_max - 1e-12));
  const double dt = (t1 - t0) / n;
  const double h = dt * m.omega_c;
  Workspace ws;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * dt;
    GaussPoint g1 = gauss_point(m, step, t + c1 * dt);
    GaussPoint g2 = gauss_point(m, step, t + c2 * dt);
    try {
      taylor_expv(m, g1, a2, g2, a1, h, X, ws);
      taylor_expv(m, g1, a1, g2, a2, h, X, ws);
    } catch (const IntegrationFailure& e) {
      throw IntegrationFailure(e.what(), t);
    }
    if (!all_finite(X)) throw IntegrationFailure("non-finite amplitudes", t + dt);
  }
}

void advance_rotating(const RotatingModel& m, const DriveStep& step, Vec& psi, double t0, double t1,
                      double dt_max) {
  Mat X = psi;
  advance_rotating(m, step, X, t0, t1, dt_max);
  psi = X.col(0);
}

Trajectory propagate_rotating(const RotatingModel& m, const DriveStep& step, const Vec& psi0,
                              const std::vector<double>& t_grid, double dt_max) {
  check_grid(t_grid);
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw ContractViolation("initial state is not normalized");
  Trajectory out;
  Vec psi = psi0;
  double t = t_grid.front();
  bool warned = false;
  for (double target : t_grid) {
    advance_rotating(m, step, psi, t, target, dt_max);
    t = target;
    if (std::abs(psi.norm() - 1.0) > 1e-9) throw IntegrationFailure("norm drift above 1e-9", t);
    if (m.mode == Mode::magnon_hp && !warned) {
      for (int j : {1, 2}) {
        const RVec& p = m.p(j);
        const double s = -p.minCoeff();
        const double occ = (psi.cwiseAbs2().array() * (p.array() + s)).sum();
        if (s > 0 && occ / (2 * s) > 0.1) {
          std::cerr << "warning: magnon occupation/2s = " << occ / (2 * s)
                    << " exceeds 0.1; the linear bosonization is leaving its range\n";
          warned = true;
        }
      }
    }
    out.times.push_back(target);
    out.states.push_back(psi);
  }
  return out;
}

// ---------------------------------------------------------------------------

DressedBasis build_dressed_basis(const SystemSpec& spec, double kappa, double gamma1, double gamma2,
                                 JumpConvention convention, double threshold_rel) {
  if (kappa < 0 || gamma1 < 0 || gamma2 < 0) throw InvalidParameter("decay rates must be >= 0");
  RotatingModel m = build_rotating_model(spec);
  Mat H = spec.omega_c * (Mat(m.E.cast<cplx>().asDiagonal()) + m.dense_coupling(1) + m.dense_coupling(2));
  auto es = hermitian_eig(H);
  DressedBasis db;
  db.eigenvalues = es.values;
  db.eigenvectors = es.vectors;
  const int d = m.dim();
  const Mat& W = es.vectors;

  // jump sources in the product basis
  Mat X1, X2;
  if (convention == JumpConvention::mapped) {
    Mat r1 = m.dense_raising(1), r2 = m.dense_raising(2);
    X1 = r1 + r1.adjoint();
    X2 = r2 + r2.adjoint();
  } else {
    RotatingModel bare = m;
    bare.D1.setIdentity();
    bare.D2.setIdentity();
    Mat r1 = bare.dense_raising(1), r2 = bare.dense_raising(2);
    X1 = r1 + r1.adjoint();
    X2 = r2 + r2.adjoint();
  }
  auto bos = build_boson_ops(spec.n_max);
  const Mat If1 = Mat::Identity(m.idx.d1 * m.idx.d2, m.idx.d1 * m.idx.d2);
  Mat Y = kron(If1, bos.a.entries + bos.adag.entries);
  if (convention == JumpConvention::mapped)
    Y -= 2.0 * (spec.beta(1) * m.p1 + spec.beta(2) * m.p2).cast<cplx>().asDiagonal();

  const RMat M1 = (W.adjoint() * X1 * W).cwiseAbs2();
  const RMat M2 = (W.adjoint() * X2 * W).cwiseAbs2();
  const RMat Mc = (W.adjoint() * Y * W).cwiseAbs2();
  db.rate_q1 = RMat::Zero(d, d);
  db.rate_q2 = RMat::Zero(d, d);
  db.rate_c = RMat::Zero(d, d);
  db.threshold = threshold_rel * spec.omega_c;
  for (int n = 0; n < d; ++n)
    for (int mm = 0; mm < n; ++mm) {
      const double delta = db.eigenvalues(n) - db.eigenvalues(mm);
      if (!(delta > 0)) continue;
      // M(a, b) = |<a|X|b>|^2, here <m|X|n>
      const double r1 = gamma1 / spec.N1 * delta / spec.omega_q1 * M1(mm, n);
      const double r2 = gamma2 / spec.N2 * delta / spec.omega_q2 * M2(mm, n);
      const double rc = kappa * delta / spec.omega_c * Mc(mm, n);
      if (r1 + r2 + rc < db.threshold) continue;
      db.rate_q1(n, mm) = r1;
      db.rate_q2(n, mm) = r2;
      db.rate_c(n, mm) = rc;
      ++db.retained;
    }
  return db;
}

namespace {

// Lambda_a = sum_{m<a} Gamma^{am}
RVec outflow(const RMat& G) { return G.rowwise().sum(); }

}  // namespace

Mat master_rhs(const Mat& H, const DressedBasis& db, const Mat& rho) {
  const RMat G = db.total();
  const RVec lam = outflow(G);
  Mat out = cplx(0, -1) * (H * rho - rho * H);
  const int d = db.dim();
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) out(a, b) -= (lam(a) + lam(b)) * rho(a, b);
  // gain: 2 sum_{n>a} Gamma^{na} rho_nn
  const RVec pops = rho.diagonal().real();
  const RVec gain = 2.0 * G.transpose() * pops;
  for (int a = 0; a < d; ++a) out(a, a) += gain(a);
  return out;
}

namespace {

class Dissipator {
 public:
  explicit Dissipator(const DressedBasis& db) : G_(db.total()), lam_(outflow(G_)) {
    const int d = db.dim();
    M_ = RMat::Zero(d, d);
    M_.diagonal() = -2.0 * lam_;
    M_ += 2.0 * G_.transpose();  // M(a, n) = 2 Gamma^{na}
  }

  void apply(Mat& rho, double tau) {
    if (tau <= 0) return;
    const Cache& c = cache(tau);
    RVec pops = rho.diagonal().real();
    rho.array() *= c.coherence.array();
    rho.diagonal() = (c.populations * pops).cast<cplx>();
  }

 private:
  struct Cache {
    RMat coherence, populations;
  };
  const Cache& cache(double tau) {
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
    const int d = static_cast<int>(lam_.size());
    Cache c;
    c.coherence.resize(d, d);
    for (int b = 0; b < d; ++b)
      for (int a = 0; a < d; ++a) c.coherence(a, b) = std::exp(-(lam_(a) + lam_(b)) * tau);
    RMat Mt = M_ * tau;
    c.populations = Mt.exp();
    return cache_.emplace(tau, std::move(c)).first->second;
  }

  RMat G_;
  RVec lam_;
  RMat M_;
  std::map<double, Cache> cache_;
};

}  // namespace

std::vector<Mat> propagate_master(const RotatingModel& m, const DriveStep& step,
                                  const DressedBasis& db, const Mat& rho0,
                                  const std::vector<double>& t_grid, MasterOptions opts) {
  check_grid(t_grid);
  if (step.envelope.kind != EnvelopeKind::abrupt)
    throw ContractViolation("propagate_master supports abrupt steps only");
  if (step.t_start != 0.0) throw ContractViolation("propagate_master expects the drive to start at t = 0");
  if (!(step.omega > 0)) throw InvalidParameter("drive frequency must be positive");
  if (rho0.rows() != m.dim() || db.dim() != m.dim()) throw ContractViolation("dimension mismatch");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-8) throw ContractViolation("initial density matrix trace != 1");
  if (t_grid.front() < 0) throw InvalidParameter("time grid must start at t >= 0");
  const double T = 2.0 * std::numbers::pi / step.omega;
  // the period propagator is built from sub-steps; always resolve the drive
  const double dt = std::min(opts.dt_max > 0 ? opts.dt_max : default_dt(m.omega_c, step.omega), T / 8.0);
  const double split = opts.split_max > 0 ? opts.split_max : 20.0 / m.omega_c;
  const Mat& W = db.eigenvectors;

  // propagator over [0, r] in the transformed frame, expressed in the dressed basis
  auto partial = [&](double r) {
    Mat U = Mat::Identity(m.dim(), m.dim());
    advance_rotating(m, step, U, 0.0, r, dt);
    Vec ph = frame_phases(m, step, r);
    U = ph.asDiagonal() * U;
    return Mat(W.adjoint() * U * W);
  };
  const Mat UT = partial(T);
  const int block = std::max(1, static_cast<int>(std::floor(split / T)));
  std::map<int, Mat> powers;
  auto power = [&](int k) -> const Mat& {
    auto it = powers.find(k);
    if (it != powers.end()) return it->second;
    Mat P = Mat::Identity(m.dim(), m.dim());
    for (int i = 0; i < k; ++i) P = UT * P;
    return powers.emplace(k, std::move(P)).first->second;
  };

  Dissipator diss(db);
  Mat rho = W.adjoint() * rho0 * W;
  long done = 0;  // completed drive periods
  std::vector<Mat> out;
  for (double t : t_grid) {
    const long K = static_cast<long>(std::floor(t / T + 1e-12));
    while (done < K) {
      const int k = static_cast<int>(std::min<long>(block, K - done));
      const Mat& P = power(k);
      diss.apply(rho, 0.5 * k * T);
      rho = P * rho * P.adjoint();
      diss.apply(rho, 0.5 * k * T);
      done += k;
    }
    Mat r = rho;
    const double rem = t - K * T;
    if (rem > 1e-15 * T) {
      Mat U = partial(rem);
      diss.apply(r, 0.5 * rem);
      r = U * r * U.adjoint();
      diss.apply(r, 0.5 * rem);
    }
    Mat prod = W * r * W.adjoint();
    prod = 0.5 * (prod + prod.adjoint()).eval();
    const double tr = prod.trace().real();
    if (!std::isfinite(tr) || std::abs(tr - 1.0) > 1e-6)
      throw IntegrationFailure("density-matrix trace drift above 1e-6", t);
    out.push_back(std::move(prod));
  }
  return out;
}

}  // namespace dicke
