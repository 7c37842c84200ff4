#include "dicke/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "dicke/errors.hpp"

namespace dicke {

double fidelity(const Vec& target, const Vec& actual) {
  if (target.size() != actual.size()) throw ContractViolation("fidelity: basis mismatch");
  return std::norm(target.dot(actual));
}

double fidelity(const QuantumState& target, const QuantumState& actual) {
  if (target.frame != actual.frame) throw ContractViolation("fidelity: frame mismatch");
  return fidelity(target.amplitudes, actual.amplitudes);
}

double fidelity(const QuantumState& target, const DensityMatrix& actual) {
  if (target.frame != actual.frame) throw ContractViolation("fidelity: frame mismatch");
  if (target.amplitudes.size() != actual.entries.rows()) throw ContractViolation("fidelity: basis mismatch");
  const cplx v = target.amplitudes.dot(actual.entries * target.amplitudes);
  return std::clamp(v.real(), 0.0, 1.0);
}

double time_averaged_population(const Trajectory& tr, const Vec& ref) {
  if (tr.states.empty()) throw InvalidParameter("empty trajectory");
  if (tr.states.size() == 1) return std::norm(ref.dot(tr.states.front()));
  const double T = tr.times.back() - tr.times.front();
  if (!(T > 0)) throw InvalidParameter("trajectory must span a positive time");
  double acc = 0.0;
  double prev = std::norm(ref.dot(tr.states[0]));
  for (size_t i = 1; i < tr.states.size(); ++i) {
    const double cur = std::norm(ref.dot(tr.states[i]));
    acc += 0.5 * (prev + cur) * (tr.times[i] - tr.times[i - 1]);
    prev = cur;
  }
  return acc / T;
}

double first_minimum_time(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw ContractViolation("first_minimum_time: size mismatch");
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  if (y.size() < 3) return nan;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double prom = 0.05 * (*hi - *lo);
  if (!(prom > 0)) return nan;

  // lowest point since the last rise, accepted once the curve climbs back by prom
  size_t cand = 0, found = 0;
  bool descended = false;
  for (size_t i = 1; i < y.size() && !found; ++i) {
    if (y[i] < y[cand]) {
      cand = i;
      descended = true;
    } else if (y[i] - y[cand] > prom) {
      if (descended) found = cand;
      cand = i;
      descended = false;
    }
  }
  if (!found) return nan;

  size_t a = found, b = found;
  while (a > 0 && y[a - 1] <= y[found] + prom) --a;
  while (b + 1 < y.size() && y[b + 1] <= y[found] + prom) ++b;
  if (b - a < 2) {
    a = found - 1;
    b = found + 1;
  }
  // y = c0 + c1 x + c2 x^2 about the candidate
  Eigen::MatrixXd A(b - a + 1, 3);
  Eigen::VectorXd rhs(b - a + 1);
  for (size_t i = a; i <= b; ++i) {
    const double x = t[i] - t[found];
    A.row(i - a) << 1.0, x, x * x;
    rhs(i - a) = y[i];
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(rhs);
  if (!(c(2) > 0)) return t[found];
  const double tv = t[found] - c(1) / (2 * c(2));
  return std::clamp(tv, t[a], t[b]);
}

SweepGrid sweep_map(const SystemSpec& spec, std::vector<double> omegas, std::vector<double> etas,
                    const Vec& initial, const SweepSettings& set) {
  if (omegas.empty() || etas.empty()) throw InvalidParameter("sweep grid is empty");
  if (!(set.duration > 0)) throw InvalidParameter("sweep duration must be positive");
  if (set.samples < 2) throw InvalidParameter("sweep needs at least two samples per cell");
  const RotatingModel model = build_rotating_model(spec);
  SweepGrid grid;
  grid.omega_values = std::move(omegas);
  grid.eta_values = std::move(etas);
  const int nw = static_cast<int>(grid.omega_values.size()), ne = static_cast<int>(grid.eta_values.size());
  grid.result = RMat::Constant(nw, ne, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> times(set.samples);
  for (int i = 0; i < set.samples; ++i) times[i] = set.duration * i / (set.samples - 1);

  std::atomic<int> next{0}, failures{0};
  auto worker = [&]() {
    for (int cell = next++; cell < nw * ne; cell = next++) {
      const int iw = cell / ne, ie = cell % ne;
      DriveStep step;
      step.omega = grid.omega_values[iw];
      const double eta = grid.eta_values[ie];
      switch (set.eta_mode) {
        case SweepSettings::EtaMode::joint: step.eta1 = step.eta2 = eta; break;
        case SweepSettings::EtaMode::only1: step.eta1 = eta; step.eta2 = set.eta_fixed; break;
        case SweepSettings::EtaMode::only2: step.eta2 = eta; step.eta1 = set.eta_fixed; break;
      }
      step.duration = set.duration;
      const double dt = set.dt_max > 0 ? set.dt_max : default_dt(spec.omega_c, step.omega);
      try {
        Trajectory tr = propagate_rotating(model, step, initial, times, dt);
        grid.result(iw, ie) = time_averaged_population(tr, initial);
      } catch (const IntegrationFailure&) {
        ++failures;
      }
    }
  };
  const int nthreads = std::max(1, std::min(set.workers, nw * ne));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  grid.failures = failures;
  return grid;
}

Vec cat_state(double alpha, int n_max, int parity) {
  Vec c = Vec::Zero(n_max + 1);
  // |alpha> +- |-alpha>: only even (odd) Fock components survive
  double log_fact = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    const bool even = n % 2 == 0;
    if ((parity > 0) != even) continue;
    const double mag = alpha == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                    : std::exp(n * std::log(std::abs(alpha)) - 0.5 * log_fact);
    c(n) = (alpha < 0 && n % 2 ? -mag : mag);
  }
  const double nrm = c.norm();
  if (nrm == 0.0) return c;
  return c / nrm;
}

CatProjectionResult cat_projection(const Vec& state, int ensemble_dim, double alpha) {
  if (!std::isfinite(alpha)) throw InvalidParameter("alpha must be finite");
  if (ensemble_dim < 1 || state.size() % ensemble_dim) throw ContractViolation("state size is not ensemble_dim x fock");
  const int nf = static_cast<int>(state.size() / ensemble_dim);
  const int n_max = nf - 1;
  // weight of |alpha> beyond the truncation
  double tail = 0.0, log_fact = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    tail += alpha == 0.0 ? (n == 0) : std::exp(2 * n * std::log(std::abs(alpha)) - log_fact - alpha * alpha);
  }
  if (1.0 - tail > 1e-10) throw TruncationError("|alpha| too large for the Fock truncation");

  Eigen::Map<const Mat> S(state.data(), nf, ensemble_dim);  // S(n, e)
  CatProjectionResult r;
  r.alpha = alpha;
  const Vec cp = cat_state(alpha, n_max, +1);
  Vec vp = S.transpose() * cp.conjugate();
  r.p_plus = vp.squaredNorm();
  r.post_plus = r.p_plus > 0 ? Vec(vp / std::sqrt(r.p_plus)) : Vec::Zero(ensemble_dim);
  if (alpha != 0.0) {
    const Vec cm = cat_state(alpha, n_max, -1);
    Vec vm = S.transpose() * cm.conjugate();
    r.p_minus = vm.squaredNorm();
    r.post_minus = r.p_minus > 0 ? Vec(vm / std::sqrt(r.p_minus)) : Vec::Zero(ensemble_dim);
  } else {
    r.post_minus = Vec::Zero(ensemble_dim);
  }
  r.p_residual = state.squaredNorm() - r.p_plus - r.p_minus;
  return r;
}

}  // namespace dicke
