#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

namespace dicke {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct BasisTag {
  enum class Kind { dicke, fock, composite };
  Kind kind = Kind::fock;
  int param = 0;  // N for dicke, n_max for fock
  std::vector<BasisTag> factors;

  static BasisTag dicke(int N) { return {Kind::dicke, N, {}}; }
  static BasisTag fock(int n_max) { return {Kind::fock, n_max, {}}; }
  static BasisTag composite(std::vector<BasisTag> f) {
    return {Kind::composite, 0, std::move(f)};
  }
  int dim() const;
  bool operator==(const BasisTag& o) const;
};

struct OperatorMatrix {
  BasisTag tag;
  Mat entries;
  bool hermitian = false;

  OperatorMatrix() = default;
  OperatorMatrix(BasisTag t, Mat m, bool herm = false);
  int dim() const { return static_cast<int>(entries.rows()); }
};

// Flat index (k1*(d2) + k2)*(n_max+1) + n over the product basis. The
// same layout serves the magnon basis with d_j = m_max+1.
struct CompositeBasisIndex {
  int d1 = 1, d2 = 1, nf = 1;

  CompositeBasisIndex() = default;
  CompositeBasisIndex(int dim1, int dim2, int fock_dim);
  static CompositeBasisIndex dicke(int N1, int N2, int n_max) {
    return {N1 + 1, N2 + 1, n_max + 1};
  }
  int dim() const { return d1 * d2 * nf; }
  int flat(int k1, int k2, int n) const;
  std::array<int, 3> triple(int index) const;
};

struct CollectiveOps {
  OperatorMatrix Sz, Splus, Sminus, Sx;
};
struct BosonOps {
  OperatorMatrix a, adag, num;
};

double ladder_h(int N, int k);
CollectiveOps build_collective_ops(int N);
BosonOps build_boson_ops(int n_max);

// Real-valued D(beta) for real beta; used on every hot path.
RMat displacement_real(double beta, int n_max);
OperatorMatrix displacement_matrix(double beta, double phase, int n_max);

double bessel_j(int q, double eta);
double assoc_laguerre(int n, int s, double x);

struct EigenSystem {
  RVec values;
  Mat vectors;
};
EigenSystem hermitian_eig(const Mat& M);
EigenSystem hermitian_eig(const OperatorMatrix& M);

// exp(-i H t) for Hermitian H.
Mat expm_hermitian(const Mat& H, double t);

Mat kron(const Mat& a, const Mat& b);
Mat commutator(const Mat& a, const Mat& b);
double max_abs(const Mat& m);

}  // namespace dicke
