#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dicke/dynamics.hpp"

namespace dicke {

enum class Area { quarter_pi, half_pi };

inline int area_divisor(Area a) { return a == Area::quarter_pi ? 2 : 1; }

struct TransitionRequest {
  int j = 1;
  int k1 = 0, k2 = 0;  // from-state; excitations or magnon numbers
  Area area = Area::half_pi;
  EnvelopeKind envelope = EnvelopeKind::abrupt;
  double mu = 1.0954451150103321;  // sqrt(6/5)
};

struct CompiledStep {
  TransitionRequest request;
  DriveStep drive;
  double rabi_rate = 0.0;  // signed, rad/s
};

struct ProtocolReport {
  std::vector<CompiledStep> steps;
  std::vector<Vec> targets;         // ideal state after each step (interaction picture)
  std::vector<double> fidelities;   // filled by execute_protocol
  Vec initial;
};

// Compiles resonances, durations and envelopes. The support of the ideal
// state starts at `initial` and is tracked symbolically.
ProtocolReport compile_protocol(const std::vector<TransitionRequest>& requests, const SystemSpec& spec,
                                double eta1, double eta2,
                                std::pair<int, int> initial = {0, 0});

// sigma from sqrt(pi) / (2 sqrt(2) n mu W0 erf[(t_end - t_start) / (2 sqrt(2) sigma)]).
double gaussian_sigma_solve(double rabi_rate, double mu, double t_start, double t_end, int n);
// Integral of mu W0 exp(-(t - t_mid)^2 / 2 sigma^2) over the interval, by adaptive quadrature.
double gaussian_area(double rabi_rate, double mu, double sigma, double t_start, double t_end);

enum class FrameHandoff {
  interaction,  // the interaction-picture amplitudes carry over between steps
  transformed   // the transformed-frame amplitudes carry over between steps
};

struct ExecuteOptions {
  double dt_max = 0.0;  // seconds; default_dt per step when zero
  FrameHandoff handoff = FrameHandoff::interaction;
  // called after each step with (step index, state)
  std::function<void(int, const Vec&)> on_step;
  // optional sample times inside the whole protocol, with callback (t, state)
  std::vector<double> sample_times;
  std::function<void(double, const Vec&)> on_sample;
};

ProtocolReport execute_protocol(const SystemSpec& spec, ProtocolReport report, ExecuteOptions opts = {});

// Basis vector |k1, k2, n> on the product basis of spec.
Vec basis_state(const SystemSpec& spec, int k1, int k2, int n = 0);

}  // namespace dicke
