#pragma once

#include <vector>

#include "dicke/operators.hpp"

namespace dicke {

enum class Mode { finite_dicke, magnon_hp };

// Physical parameters. Frequencies and couplings are angular (rad/s).
struct SystemSpec {
  Mode mode = Mode::finite_dicke;
  int N1 = 4, N2 = 4;
  double omega_c = 0.0;
  double eps1 = 0.0, eps2 = 0.0;
  double g1 = 0.0, g2 = 0.0;
  double omega_q1 = 0.0, omega_q2 = 0.0;
  int q0 = -1;
  int n_max = 30;
  int m_max = 4;

  double beta(int j) const { return (j == 1 ? g1 : g2) / omega_c; }
  double s(int j) const { return 0.5 * (j == 1 ? N1 : N2); }
  int N(int j) const { return j == 1 ? N1 : N2; }
  double eps(int j) const { return j == 1 ? eps1 : eps2; }
  double g(int j) const { return j == 1 ? g1 : g2; }
  double omega_q(int j) const { return j == 1 ? omega_q1 : omega_q2; }
  // Dimension of ensemble j's factor: N+1 for Dicke, m_max+1 for magnons.
  int ensemble_dim(int j) const;
  CompositeBasisIndex index() const;
  void validate() const;
};

enum class EnvelopeKind { abrupt, gaussian };

struct Envelope {
  EnvelopeKind kind = EnvelopeKind::abrupt;
  double mu = 1.0;
  double sigma = 0.0;  // seconds
};

// One protocol segment. eta_j = A_j / omega. The envelope scales eps of the
// driven ensemble only.
struct DriveStep {
  double omega = 0.0;
  double eta1 = 0.0, eta2 = 0.0;
  double duration = 0.0;
  double t_start = 0.0;
  int driven = 0;  // 1, 2 or 0 when no ensemble is shaped
  Envelope envelope;

  double eta(int j) const { return j == 1 ? eta1 : eta2; }
  double t_end() const { return t_start + duration; }
};

double envelope_value(const DriveStep& step, double t);

// Closed-form resonances and rates.
double resonance_delta(int j, int k1, int k2, const SystemSpec& spec);
double rabi_rate(int j, int k, double eta, const SystemSpec& spec, int s = 0, int n = 0);
double magnon_resonance_delta(int j, int m1, int m2, const SystemSpec& spec);
double magnon_rabi_rate(int j, int m, double eta, const SystemSpec& spec);
// Mode-dispatching versions used by the protocol compiler.
double transition_delta(int j, int k1, int k2, const SystemSpec& spec);
double transition_rate(int j, int k, double eta, const SystemSpec& spec);
double drive_frequency(double delta, const SystemSpec& spec);

// Operators on the product basis, in omega_c units. Every Hamiltonian of
// both modes has the form
//   H = diag(E) + sum_j A_j cos(wt) diag(p_j) + sum_j c_j (L_j (x) D_j + h.c.)
// with L_j the raising ladder of ensemble j (amplitudes h_j).
struct RotatingModel {
  Mode mode = Mode::finite_dicke;
  CompositeBasisIndex idx;
  RVec E;
  RVec p1, p2;
  RVec h1, h2;      // h_j(k) = <k+1|L_j|k>
  double c1 = 0.0, c2 = 0.0;
  RMat D1, D2;      // D(beta_j); real for real beta
  double omega_c = 1.0;

  int dim() const { return idx.dim(); }
  const RVec& p(int j) const { return j == 1 ? p1 : p2; }
  const RVec& h(int j) const { return j == 1 ? h1 : h2; }
  const RMat& D(int j) const { return j == 1 ? D1 : D2; }
  double c(int j) const { return j == 1 ? c1 : c2; }

  // Y += scale * V_j X, where columns of X are state vectors.
  void apply_coupling(int j, const Mat& X, Mat& Y, cplx scale) const;
  void apply_coupling(int j, const Vec& x, Vec& y, cplx scale) const;
  // Same, with caller-owned scratch buffers.
  void apply_coupling(int j, const Mat& X, Mat& Y, cplx scale, Mat& up, Mat& dn) const;
  Mat dense_coupling(int j) const;
  // Raising part L_j (x) D_j only, unscaled.
  Mat dense_raising(int j) const;
};

RotatingModel build_rotating_model(const SystemSpec& spec);

// H'(t) in rad/s (finite mode).
OperatorMatrix build_transformed_hamiltonian(const SystemSpec& spec, const DriveStep& step, double t);
// Undriven H' (A_j = 0, unit envelope) in rad/s, either mode.
Mat undriven_hamiltonian(const SystemSpec& spec);
// Interaction-picture Hamiltonian with respect to diag(E) + A cos(wt) p, in rad/s.
Mat interaction_hamiltonian(const RotatingModel& model, const DriveStep& step, double t);
OperatorMatrix build_magnon_hamiltonian(const SystemSpec& spec, const DriveStep& step, double t);

OperatorMatrix build_effective_hamiltonian(int j, int k1p, int k2p, const SystemSpec& spec, double eta);

struct LabState {
  Vec amplitudes;
  Mat U;  // maps transformed-frame vectors to the lab frame
  double xi = 0.0;
};
Mat transformation_U(const SystemSpec& spec);
LabState lab_frame_state(int k1, int k2, const SystemSpec& spec);

struct SidebandEntry {
  int j = 1, k1 = 0, k2 = 0;
  int s = 0;        // change of photon number n' - n, starting from n = 0
  int q = 0;        // Fourier harmonic of the drive phase
  double offset = 0.0;  // detuning is q*omega + offset (rad/s)
  double rate = 0.0;    // signed coupling (rad/s)
  double resonant_omega() const;
};

std::vector<SidebandEntry> enumerate_sidebands(const SystemSpec& spec, int k1, int k2, int s_max,
                                               int q_max, double eta1, double eta2);

}  // namespace dicke
