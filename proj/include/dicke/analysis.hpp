#pragma once

#include <functional>
#include <vector>

#include "dicke/dynamics.hpp"

namespace dicke {

double fidelity(const QuantumState& target, const QuantumState& actual);
double fidelity(const QuantumState& target, const DensityMatrix& actual);
double fidelity(const Vec& target, const Vec& actual);

// Trapezoidal average of |<ref|psi(t)>|^2 over the trajectory grid.
double time_averaged_population(const Trajectory& trajectory, const Vec& reference);

// Time of the first dip of a sampled curve. Ripples smaller than 5% of the
// curve's range are ignored; the time comes from a least-squares parabola over
// the bottom of the dip. NaN when the curve has no interior minimum.
double first_minimum_time(const std::vector<double>& t, const std::vector<double>& y);

struct SweepGrid {
  std::vector<double> omega_values;  // rad/s
  std::vector<double> eta_values;
  RMat result;                       // |omega| x |eta|, NaN marks a failed cell
  int failures = 0;
};

struct SweepSettings {
  enum class EtaMode { joint, only1, only2 } eta_mode = EtaMode::joint;
  double eta_fixed = 0.0;    // value used for the other ensemble when not joint
  double duration = 0.0;     // seconds
  int samples = 400;         // trajectory points per cell (inclusive of t = 0)
  double dt_max = 0.0;       // seconds; default_dt when zero
  int workers = 1;
};

SweepGrid sweep_map(const SystemSpec& spec, std::vector<double> omega_values, std::vector<double> eta_values,
                    const Vec& initial, const SweepSettings& settings);

struct CatProjectionResult {
  double p_plus = 0.0, p_minus = 0.0, p_residual = 0.0;
  Vec post_plus, post_minus;  // normalized ensemble states (zero if the branch is empty)
  double alpha = 0.0;
};

// The state lives on (ensemble basis) x Fock(n_max); ensemble_dim is the
// size of the first factor.
CatProjectionResult cat_projection(const Vec& state, int ensemble_dim, double alpha);
// Normalized even (+) or odd (-) cat state on Fock(n_max).
Vec cat_state(double alpha, int n_max, int parity);

}  // namespace dicke
