#pragma once

#include <functional>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

enum class Frame { transformed, lab };

struct QuantumState {
  Vec amplitudes;
  Frame frame = Frame::transformed;
};

struct DensityMatrix {
  Mat entries;
  Frame frame = Frame::transformed;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
};

// H(t) in rad/s on a fixed basis.
using HamiltonianProvider = std::function<Mat(double)>;

// Exponential midpoint: psi <- exp(-i H(t + dt/2) dt) psi, with dt <= dt_max.
Trajectory propagate_unitary(const HamiltonianProvider& H, const Vec& psi0,
                             const std::vector<double>& t_grid, double dt_max);

// Fourth-order commutator-free Magnus stepping of the interaction-picture
// Hamiltonian P(t) V(t) P(t)^dagger, applied matrix-free. Columns of X are
// advanced together.
void advance_rotating(const RotatingModel& model, const DriveStep& step, Mat& X, double t0,
                      double t1, double dt_max);
void advance_rotating(const RotatingModel& model, const DriveStep& step, Vec& psi, double t0,
                      double t1, double dt_max);
Trajectory propagate_rotating(const RotatingModel& model, const DriveStep& step, const Vec& psi0,
                              const std::vector<double>& t_grid, double dt_max);

// Step size used when none is given: 0.1/omega_c, shortened to an eighth of
// the drive period for fast drives.
double default_dt(double omega_c, double drive_omega);

// Phase map between the interaction picture of a step and the transformed frame:
// psi_transformed(t) = diag(exp(-i theta(t))) psi_I(t).
Vec frame_phases(const RotatingModel& model, const DriveStep& step, double t);

enum class JumpConvention {
  mapped,  // qubit-frame lowering/raising and a + a^dag carried into the transformed frame
  bare     // S^- + S^+ and a + a^dag taken literally in the transformed frame
};

struct DressedBasis {
  RVec eigenvalues;  // rad/s, ascending
  Mat eigenvectors;  // columns in the product basis
  // rate(n, m) for n > m, 1/s; all other entries are zero
  RMat rate_q1, rate_q2, rate_c;
  double threshold = 0.0;
  int retained = 0;

  RMat total() const { return rate_q1 + rate_q2 + rate_c; }
  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

DressedBasis build_dressed_basis(const SystemSpec& spec, double kappa, double gamma1, double gamma2,
                                 JumpConvention convention = JumpConvention::mapped,
                                 double threshold_rel = 1e-12);

// Right-hand side of the dressed-state master equation, everything expressed
// in the dressed eigenbasis.
Mat master_rhs(const Mat& H_dressed, const DressedBasis& dressed, const Mat& rho_dressed);

struct MasterOptions {
  double dt_max = 0.0;      // seconds; default 0.1/omega_c
  double split_max = 0.0;   // seconds between dissipator half-steps; default 20/omega_c
};

// Driven evolution under a single abrupt step starting at t = 0. rho0 and the
// returned matrices live in the product basis of the transformed frame.
std::vector<Mat> propagate_master(const RotatingModel& model, const DriveStep& step,
                                  const DressedBasis& dressed, const Mat& rho0,
                                  const std::vector<double>& t_grid, MasterOptions opts = {});

}  // namespace dicke
