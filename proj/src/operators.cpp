#include "dicke/operators.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <numeric>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

int BasisTag::dim() const {
  switch (kind) {
    case Kind::dicke:
    case Kind::fock:
      return param + 1;
    case Kind::composite:
      return std::accumulate(factors.begin(), factors.end(), 1,
                             [](int acc, const BasisTag& f) { return acc * f.dim(); });
  }
  return 0;
}

bool BasisTag::operator==(const BasisTag& o) const {
  return kind == o.kind && param == o.param && factors == o.factors;
}

OperatorMatrix::OperatorMatrix(BasisTag t, Mat m, bool herm)
    : tag(std::move(t)), entries(std::move(m)), hermitian(herm) {
  if (entries.rows() != entries.cols() || tag.dim() != entries.rows())
    throw ContractViolation("operator dimension does not match basis tag");
  if (hermitian && max_abs(entries - entries.adjoint()) > 1e-12 * std::max(1.0, max_abs(entries)))
    throw ContractViolation("matrix flagged Hermitian is not Hermitian");
}

CompositeBasisIndex::CompositeBasisIndex(int dim1, int dim2, int fock_dim)
    : d1(dim1), d2(dim2), nf(fock_dim) {
  if (d1 < 1 || d2 < 1 || nf < 1) throw InvalidParameter("basis factor dimension must be positive");
}

int CompositeBasisIndex::flat(int k1, int k2, int n) const {
  if (k1 < 0 || k1 >= d1 || k2 < 0 || k2 >= d2 || n < 0 || n >= nf)
    throw InvalidParameter("basis triple out of range");
  return (k1 * d2 + k2) * nf + n;
}

std::array<int, 3> CompositeBasisIndex::triple(int index) const {
  if (index < 0 || index >= dim()) throw InvalidParameter("flat index out of range");
  int n = index % nf;
  int rest = index / nf;
  return {rest / d2, rest % d2, n};
}

double ladder_h(int N, int k) {
  if (k < 0 || k >= N) return 0.0;
  // integer product keeps [S+,S-] = 2Sz exact in double
  return std::sqrt(static_cast<double>(static_cast<long long>(k + 1) * (N - k)));
}

CollectiveOps build_collective_ops(int N) {
  if (N < 1) throw InvalidParameter("ensemble size must be >= 1, got " + std::to_string(N));
  const int d = N + 1;
  Mat sz = Mat::Zero(d, d), sp = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) sz(k, k) = k - 0.5 * N;
  for (int k = 0; k < N; ++k) sp(k + 1, k) = ladder_h(N, k);
  Mat sm = sp.adjoint();
  Mat sx = 0.5 * (sp + sm);
  auto tag = BasisTag::dicke(N);
  return {{tag, sz, true}, {tag, sp}, {tag, sm}, {tag, sx, true}};
}

BosonOps build_boson_ops(int n_max) {
  if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
  const int d = n_max + 1;
  Mat a = Mat::Zero(d, d), num = Mat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  for (int n = 0; n < d; ++n) num(n, n) = n;
  auto tag = BasisTag::fock(n_max);
  return {{tag, a}, {tag, a.adjoint()}, {tag, num, true}};
}

double assoc_laguerre(int n, int s, double x) {
  if (n < 0 || s < 0) throw InvalidParameter("Laguerre degree and superscript must be >= 0");
  if (n == 0) return 1.0;
  double lm1 = 1.0, l = 1.0 + s - x;
  for (int k = 1; k < n; ++k) {
    double next = ((2.0 * k + 1.0 + s - x) * l - (k + s) * lm1) / (k + 1.0);
    lm1 = l;
    l = next;
  }
  return l;
}

RMat displacement_real(double beta, int n_max) {
  if (!std::isfinite(beta)) throw InvalidParameter("displacement amplitude must be finite");
  if (n_max < 0) throw InvalidParameter("n_max must be >= 0");
  const int d = n_max + 1;
  const double x = beta * beta;
  const double pre = std::exp(-0.5 * x);
  RMat D(d, d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const int lo = std::min(m, n), s = std::abs(m - n);
      // sqrt(lo!/hi!) via lgamma
      const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + s + 1.0)));
      const double b = (m >= n) ? beta : -beta;
      D(m, n) = pre * std::pow(b, s) * ratio * assoc_laguerre(lo, s, x);
    }
  }
  const double tail = pre * std::pow(std::abs(beta), n_max) *
                      std::exp(-0.5 * std::lgamma(n_max + 1.0));
  if (tail >= 1e-12) {
    // once per (n_max, beta); callers build the same matrices many times and from several threads
    static std::mutex mu;
    static std::set<std::pair<int, double>> seen;
    std::lock_guard lock(mu);
    if (seen.insert({n_max, beta}).second) {
      std::ostringstream msg;
      msg << "warning: Fock truncation n_max=" << n_max << " is short for beta=" << beta << " (tail " << tail << ")\n";
      std::cerr << msg.str();
    }
  }
  return D;
}

OperatorMatrix displacement_matrix(double beta, double phase, int n_max) {
  RMat Dr = displacement_real(beta, n_max);
  const int d = n_max + 1;
  Mat D(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) D(m, n) = Dr(m, n) * std::polar(1.0, (m - n) * phase);
  return {BasisTag::fock(n_max), D};
}

namespace {

double bessel_series(int q, double x) {
  // J_q(x) = sum_k (-1)^k (x/2)^{2k+q} / (k! (k+q)!)
  const double h = 0.5 * x;
  double term = std::exp(q * std::log(h) - std::lgamma(q + 1.0));
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -h * h / (k * static_cast<double>(k + q));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_miller(int q, double x) {
  const int top = std::max(q, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(40.0 * (top + 1)));
  if (start % 2) ++start;
  double jp1 = 0.0, j = 1e-300, norm = 0.0, result = 0.0;
  for (int k = start; k > 0; --k) {
    const double jm1 = (2.0 * k / x) * j - jp1;
    jp1 = j;
    j = jm1;
    if (k - 1 == q) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
  }
  norm += j;  // J_0 term
  return result / norm;
}

}  // namespace

double bessel_j(int q, double eta) {
  if (q < 0) return (q % 2 ? -1.0 : 1.0) * bessel_j(-q, eta);
  if (eta < 0) return (q % 2 ? -1.0 : 1.0) * bessel_j(q, -eta);
  if (eta == 0.0) return q == 0 ? 1.0 : 0.0;
  if (eta < 1e-2) return bessel_series(q, eta);
  return bessel_miller(q, eta);
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

EigenSystem hermitian_eig(const Mat& M) {
  if (M.rows() != M.cols()) throw ContractViolation("hermitian_eig needs a square matrix");
  if (max_abs(M - M.adjoint()) > 1e-10 * std::max(1.0, max_abs(M)))
    throw ContractViolation("hermitian_eig input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  if (es.info() != Eigen::Success) throw ContractViolation("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

EigenSystem hermitian_eig(const OperatorMatrix& M) { return hermitian_eig(M.entries); }

Mat expm_hermitian(const Mat& H, double t) {
  auto es = hermitian_eig(H);
  Vec ph(es.values.size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, -es.values(i) * t);
  return es.vectors * ph.asDiagonal() * es.vectors.adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace dicke
