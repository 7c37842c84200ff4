#include "dicke/protocol.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

Vec basis_state(const SystemSpec& spec, int k1, int k2, int n) {
  const auto idx = spec.index();
  Vec v = Vec::Zero(idx.dim());
  v(idx.flat(k1, k2, n)) = 1.0;
  return v;
}

double gaussian_area(double rabi_rate, double mu, double sigma, double t_start, double t_end) {
  const double tm = 0.5 * (t_start + t_end);
  // integrate in units of sigma to keep the quadrature well scaled
  auto f = [&](double x) { return std::exp(-0.5 * x * x); };
  double err = 0.0;
  const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, (t_start - tm) / sigma, (t_end - tm) / sigma, 15, 1e-14, &err);
  return mu * std::abs(rabi_rate) * sigma * I;
}

double gaussian_sigma_solve(double rabi_rate, double mu, double t_start, double t_end, int n) {
  if (!(mu > 1)) throw InvalidParameter("Gaussian peak factor mu must exceed 1");
  if (!(t_end > t_start)) throw InvalidParameter("Gaussian interval must have positive length");
  if (n != 1 && n != 2) throw InvalidParameter("area divisor n must be 1 or 2");
  if (!(rabi_rate != 0)) throw InvalidParameter("Rabi rate must be nonzero");
  const double W = std::abs(rabi_rate), T = t_end - t_start;
  const double s_inf = std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(2.0) * n * mu * W);
  auto f = [&](double s) { return s_inf / std::erf(T / (2.0 * std::sqrt(2.0) * s)); };

  // Damped fixed point with Aitken extrapolation every third iterate.
  const double damping = 0.5;
  double s = s_inf, residual = 0.0;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const double s1 = (1 - damping) * s + damping * f(s);
    const double s2 = (1 - damping) * s1 + damping * f(s1);
    const double den = s2 - 2 * s1 + s;
    double next = s2;
    if (std::abs(den) > 1e-300) {
      const double aitken = s - (s1 - s) * (s1 - s) / den;
      if (aitken > 0 && std::isfinite(aitken)) next = aitken;
    }
    residual = std::abs(next - f(next)) / next;
    s = next;
    if (residual < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverFailure("sigma fixed point did not converge", residual);
  const double area = gaussian_area(W, mu, s, t_start, t_end);
  const double want = std::numbers::pi / (2.0 * n);
  if (std::abs(area - want) > 1e-6)
    throw SolverFailure("Gaussian pulse area check failed", std::abs(area - want));
  return s;
}

ProtocolReport compile_protocol(const std::vector<TransitionRequest>& requests, const SystemSpec& spec,
                                double eta1, double eta2, std::pair<int, int> initial) {
  spec.validate();
  ProtocolReport rep;
  rep.initial = basis_state(spec, initial.first, initial.second);
  std::set<std::pair<int, int>> support{initial};
  const auto idx = spec.index();
  Vec ideal = rep.initial;
  double t = 0.0;
  for (size_t l = 0; l < requests.size(); ++l) {
    const auto& r = requests[l];
    const int step = static_cast<int>(l) + 1;
    if (r.j != 1 && r.j != 2) throw ProtocolError("step " + std::to_string(step) + ": ensemble must be 1 or 2", step);
    const std::pair<int, int> from{r.k1, r.k2};
    const std::pair<int, int> to = r.j == 1 ? std::pair{r.k1 + 1, r.k2} : std::pair{r.k1, r.k2 + 1};
    if (!support.count(from))
      throw ProtocolError("step " + std::to_string(step) + ": state (" + std::to_string(r.k1) + "," +
                              std::to_string(r.k2) + ") is not populated at this point",
                          step);
    if (to.first >= idx.d1 || to.second >= idx.d2)
      throw ProtocolError("step " + std::to_string(step) + ": target excitation exceeds the basis", step);
    const int kd = r.j == 1 ? r.k1 : r.k2;
    CompiledStep cs;
    cs.request = r;
    cs.rabi_rate = transition_rate(r.j, kd, r.j == 1 ? eta1 : eta2, spec);
    if (cs.rabi_rate == 0.0)
      throw ProtocolError("step " + std::to_string(step) + ": coupling vanishes (Bessel zero)", step);
    const int n = area_divisor(r.area);
    const double area = std::numbers::pi / (2.0 * n);
    cs.drive.omega = drive_frequency(transition_delta(r.j, r.k1, r.k2, spec), spec);
    cs.drive.eta1 = eta1;
    cs.drive.eta2 = eta2;
    cs.drive.duration = area / std::abs(cs.rabi_rate);
    cs.drive.t_start = t;
    cs.drive.driven = r.j;
    cs.drive.envelope.kind = r.envelope;
    if (r.envelope == EnvelopeKind::gaussian) {
      cs.drive.envelope.mu = r.mu;
      cs.drive.envelope.sigma = gaussian_sigma_solve(cs.rabi_rate, r.mu, t, t + cs.drive.duration, n);
    }
    t += cs.drive.duration;

    // ideal two-level rotation exp(-i G t (|b><a| + |a><b|))
    const int a = idx.flat(from.first, from.second, 0), b = idx.flat(to.first, to.second, 0);
    const double th = std::copysign(area, cs.rabi_rate);
    const cplx va = ideal(a), vb = ideal(b);
    ideal(a) = std::cos(th) * va - cplx(0, 1) * std::sin(th) * vb;
    ideal(b) = -cplx(0, 1) * std::sin(th) * va + std::cos(th) * vb;
    if (r.area == Area::half_pi) support.erase(from);
    support.insert(to);
    rep.steps.push_back(cs);
    rep.targets.push_back(ideal);
  }
  return rep;
}

ProtocolReport execute_protocol(const SystemSpec& spec, ProtocolReport rep, ExecuteOptions opts) {
  const RotatingModel model = build_rotating_model(spec);
  Vec psi = rep.initial;
  std::vector<double> samples = opts.sample_times;
  std::sort(samples.begin(), samples.end());
  size_t next_sample = 0;
  auto emit_until = [&](double t_now, const Vec& state) {
    while (next_sample < samples.size() && samples[next_sample] <= t_now + 1e-18) {
      if (opts.on_sample) opts.on_sample(samples[next_sample], state);
      ++next_sample;
    }
  };
  rep.fidelities.clear();
  emit_until(0.0, psi);
  for (size_t l = 0; l < rep.steps.size(); ++l) {
    const DriveStep& d = rep.steps[l].drive;
    const double dt = opts.dt_max > 0 ? opts.dt_max : default_dt(spec.omega_c, d.omega);
    if (l > 0 && opts.handoff == FrameHandoff::transformed) {
      const DriveStep& prev = rep.steps[l - 1].drive;
      psi = (frame_phases(model, prev, d.t_start).array() * frame_phases(model, d, d.t_start).conjugate().array() *
             psi.array()).matrix();
    }
    double t = d.t_start;
    while (next_sample < samples.size() && samples[next_sample] < d.t_end()) {
      const double ts = std::max(samples[next_sample], t);
      advance_rotating(model, d, psi, t, ts, dt);
      t = ts;
      emit_until(t, psi);
    }
    advance_rotating(model, d, psi, t, d.t_end(), dt);
    if (std::abs(psi.norm() - 1.0) > 1e-9) throw IntegrationFailure("norm drift above 1e-9", d.t_end());
    emit_until(d.t_end(), psi);
    rep.fidelities.push_back(std::norm(rep.targets[l].dot(psi)));
    if (opts.on_step) opts.on_step(static_cast<int>(l), psi);
  }
  return rep;
}

}  // namespace dicke
