#include "dicke/presets.hpp"

#include <cmath>
#include <numbers>

namespace dicke::presets {

SystemSpec finite_system(int n_max) {
  SystemSpec s;
  s.mode = Mode::finite_dicke;
  s.N1 = s.N2 = 4;
  s.omega_c = kOmegaC;
  s.eps1 = s.eps2 = 0.01 * kOmegaC;
  s.g1 = 0.25 * kOmegaC;
  s.g2 = 0.49 * kOmegaC;
  s.omega_q1 = 2.87 * kOmegaC;
  s.omega_q2 = 4.94 * kOmegaC;
  s.n_max = n_max;
  return s;
}

SystemSpec magnon_system(int N, int m_max, int n_max) {
  SystemSpec s;
  s.mode = Mode::magnon_hp;
  s.N1 = s.N2 = N;
  s.omega_c = kOmegaC;
  s.eps1 = s.eps2 = 0.01 * kOmegaC;
  s.g1 = 0.30 * kOmegaC;
  s.g2 = 0.49 * kOmegaC;
  s.omega_q1 = 2.78 * kOmegaC;
  s.omega_q2 = 4.94 * kOmegaC;
  s.n_max = n_max;
  s.m_max = m_max;
  return s;
}

namespace {

TransitionRequest req(int j, int k1, int k2, Area a, EnvelopeKind e) {
  TransitionRequest r;
  r.j = j;
  r.k1 = k1;
  r.k2 = k2;
  r.area = a;
  r.envelope = e;
  return r;
}

}  // namespace

ProtocolPreset table1(EnvelopeKind e, int n_max) {
  ProtocolPreset p;
  p.spec = finite_system(n_max);
  p.eta1 = 0.18;
  p.eta2 = 0.26;
  p.requests = {req(1, 0, 0, Area::quarter_pi, e), req(1, 1, 0, Area::half_pi, e),
                req(1, 2, 0, Area::half_pi, e),    req(1, 3, 0, Area::half_pi, e),
                req(2, 0, 0, Area::half_pi, e),    req(2, 0, 1, Area::half_pi, e),
                req(2, 0, 2, Area::half_pi, e),    req(2, 0, 3, Area::half_pi, e)};
  return p;
}

ProtocolPreset table2(EnvelopeKind e, int N, int n_max) {
  ProtocolPreset p;
  p.spec = magnon_system(N, 4, n_max);
  p.eta1 = p.eta2 = 0.12;
  p.requests = {req(1, 0, 0, Area::quarter_pi, e), req(1, 1, 0, Area::half_pi, e),
                req(2, 0, 0, Area::half_pi, e), req(2, 0, 1, Area::half_pi, e)};
  return p;
}

std::vector<TransitionCase> selective_cases() {
  return {{1, {0, 1}, {1, 1}, {0, 1}, "|0,1>"},
          {2, {1, 0}, {1, 1}, {1, 0}, "|1,0>"},
          {1, {1, 1}, {1, 1}, {2, 1}, "|2,1>"},
          {2, {1, 1}, {1, 1}, {1, 2}, "|1,2>"}};
}

DissipativePreset table3(int n_max) {
  DissipativePreset d;
  d.spec = finite_system(n_max);
  d.eta = 1.09;
  d.kappa = 1e-5 * kOmegaC;
  d.gammas = {0.0, 1e-5 * kOmegaC, 1e-4 * kOmegaC};
  d.cases = selective_cases();
  return d;
}

DissipativePreset table4(int n_max) {
  DissipativePreset d;
  d.spec = magnon_system(200, 3, n_max);
  d.eta = 0.12;
  d.kappa = 1e-5 * kOmegaC;
  d.gammas = {0.0, 1e-5 * kOmegaC, 1e-4 * kOmegaC};
  d.cases = selective_cases();
  return d;
}

DriveStep transition_step(const SystemSpec& spec, const TransitionCase& c, double eta1, double eta2) {
  DriveStep s;
  s.omega = drive_frequency(transition_delta(c.j, c.lower.first, c.lower.second, spec), spec);
  s.eta1 = eta1;
  s.eta2 = eta2;
  s.driven = c.j;
  return s;
}

double transfer_time(const SystemSpec& spec, const TransitionCase& c, double eta) {
  const int k = c.j == 1 ? c.lower.first : c.lower.second;
  return std::numbers::pi / (2.0 * std::abs(transition_rate(c.j, k, eta, spec)));
}

std::vector<std::string> names() { return {"table1", "table2", "fig2", "table3", "table4"}; }

}  // namespace dicke::presets
