#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dicke/protocol.hpp"

namespace dicke::presets {

inline constexpr double kTwoPi = 6.283185307179586;
inline constexpr double kOmegaC = kTwoPi * 2.2e9;

// N1 = N2 = 4, g = (0.25, 0.49), omega_q = (2.87, 4.94), eps = 0.01 (omega_c units)
SystemSpec finite_system(int n_max = 30);
// Two-mode bosonized ensembles, N1 = N2 = N, g = (0.30, 0.49), omega_q = (2.78, 4.94)
SystemSpec magnon_system(int N = 200, int m_max = 4, int n_max = 30);

struct ProtocolPreset {
  SystemSpec spec;
  double eta1 = 0.0, eta2 = 0.0;
  std::vector<TransitionRequest> requests;
};

// Eight-step entangled Dicke protocol.
ProtocolPreset table1(EnvelopeKind envelope, int n_max = 30);
// Four-step magnon NOON protocol.
ProtocolPreset table2(EnvelopeKind envelope, int N = 200, int n_max = 30);

// Single selective transition between `lower` and its partner one excitation
// up in ensemble j, started from `initial`.
struct TransitionCase {
  int j = 1;
  std::pair<int, int> lower, initial, target;
  std::string label;
};

std::vector<TransitionCase> selective_cases();  // the four transitions out of |1,1>

struct DissipativePreset {
  SystemSpec spec;
  double eta = 0.0;
  double kappa = 0.0;                 // rad/s
  std::vector<double> gammas;         // rad/s, one column each
  std::vector<TransitionCase> cases;
};

DissipativePreset table3(int n_max = 15);
DissipativePreset table4(int n_max = 15);

// Drive step resonant with a selective transition, starting at t = 0.
DriveStep transition_step(const SystemSpec& spec, const TransitionCase& c, double eta1, double eta2);
// pi / (2|G|): time for complete transfer between the two states.
double transfer_time(const SystemSpec& spec, const TransitionCase& c, double eta);

std::vector<std::string> names();

}  // namespace dicke::presets
