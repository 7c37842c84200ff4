#include "dicke/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "dicke/analysis.hpp"
#include "dicke/errors.hpp"

namespace dicke {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> linspace(double a, double b, int n) {
  if (n <= 1) return {b};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

std::string column_name(int k1, int k2, int n) {
  return "P_" + std::to_string(k1) + "_" + std::to_string(k2) + "_" + std::to_string(n);
}

// Runs task(i) for i in [0, n) on `workers` threads; the first exception wins.
template <class F>
void parallel_for(int n, int workers, F task) {
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto body = [&]() {
    for (int i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min(workers, n); ++w) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

json base_summary(const ExperimentConfig& cfg) {
  return json{{"command", cfg.command}, {"resolved_config", resolved_json(cfg)}};
}

json truncation_json(const SystemSpec& spec) {
  json t{{"n_max", spec.n_max}, {"dim", spec.index().dim()}};
  if (spec.mode == Mode::magnon_hp) t["m_max"] = spec.m_max;
  return t;
}

struct SimResult {
  std::vector<double> times;
  std::vector<std::vector<double>> pops;  // [track][time]
  std::vector<double> norms;
};

SimResult simulate_once(const SystemSpec& spec, const SimulateConfig& sc, const RunConfig& run) {
  const RotatingModel model = build_rotating_model(spec);
  DriveStep step = sc.drive;
  const double T = step.duration;
  const std::vector<double> grid = T > 0 ? linspace(0.0, T, std::max(run.samples, 2)) : std::vector<double>{0.0};
  const double dt = run.dt_max > 0 ? run.dt_max : default_dt(spec.omega_c, step.omega);
  const Vec psi0 = basis_state(spec, sc.initial.k1, sc.initial.k2, sc.initial.n);
  const Trajectory tr = propagate_rotating(model, step, psi0, grid, dt);
  SimResult r;
  r.times = tr.times;
  r.pops.resize(sc.track.size());
  for (size_t k = 0; k < sc.track.size(); ++k) {
    const auto& s = sc.track[k];
    const int a = spec.index().flat(s.k1, s.k2, s.n);
    for (const Vec& psi : tr.states) r.pops[k].push_back(std::norm(psi(a)));
  }
  for (const Vec& psi : tr.states) r.norms.push_back(psi.norm());
  return r;
}

}  // namespace

RunArtifact run_simulate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const SimulateConfig& sc = cfg.simulate;
  const SimResult r = simulate_once(cfg.system, sc, cfg.run);

  std::ostringstream csv;
  csv << "t_seconds";
  for (const auto& s : sc.track) csv << ',' << column_name(s.k1, s.k2, s.n);
  csv << ",norm\n";
  for (size_t i = 0; i < r.times.size(); ++i) {
    csv << format_double(r.times[i]);
    for (const auto& p : r.pops) csv << ',' << format_double(p[i]);
    csv << ',' << format_double(r.norms[i]) << '\n';
  }

  RunArtifact art;
  art.summary = base_summary(cfg);
  json tracks = json::array();
  for (size_t k = 0; k < sc.track.size(); ++k) {
    const auto& s = sc.track[k];
    tracks.push_back(json{{"state", column_name(s.k1, s.k2, s.n)},
                          {"final_population", r.pops[k].back()},
                          {"first_minimum_s", first_minimum_time(r.times, r.pops[k])}});
  }
  art.summary["drive_omega_over_omega_c"] = sc.drive.omega / cfg.system.omega_c;
  art.summary["tracked"] = tracks;
  art.summary["truncation"] = truncation_json(cfg.system);
  if (cfg.run.convergence_check) {
    SystemSpec big = cfg.system;
    big.n_max += 10;
    const SimResult r2 = simulate_once(big, sc, cfg.run);
    double diff = 0.0;
    for (size_t k = 0; k < r.pops.size(); ++k)
      for (size_t i = 0; i < r.times.size(); ++i) diff = std::max(diff, std::abs(r.pops[k][i] - r2.pops[k][i]));
    art.summary["convergence"] = json{{"n_max", big.n_max}, {"max_population_change", diff}};
  }
  art.summary["wall_time_s"] = seconds_since(t0);
  art.files.push_back({"timeseries.csv", csv.str()});
  return art;
}

namespace {

struct ProtocolRun {
  ProtocolReport report;
  std::vector<double> times;
  std::vector<Vec> states;
};

ProtocolRun protocol_once(const SystemSpec& spec, const ProtocolConfig& pc, EnvelopeKind env, const RunConfig& run,
                          bool sample) {
  std::vector<TransitionRequest> reqs = pc.steps;
  for (auto& r : reqs) {
    r.envelope = env;
    r.mu = pc.mu;
  }
  ProtocolRun out;
  out.report = compile_protocol(reqs, spec, pc.eta1, pc.eta2, pc.initial);
  ExecuteOptions opts;
  opts.dt_max = run.dt_max;
  opts.handoff = pc.handoff;
  if (sample && !out.report.steps.empty()) {
    opts.sample_times = linspace(0.0, out.report.steps.back().drive.t_end(), std::max(run.samples, 2));
    opts.on_sample = [&](double t, const Vec& psi) {
      out.times.push_back(t);
      out.states.push_back(psi);
    };
  }
  out.report = execute_protocol(spec, out.report, opts);
  return out;
}

}  // namespace

RunArtifact run_protocol(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const SystemSpec& spec = cfg.system;
  const auto idx = spec.index();
  RunArtifact art;
  art.summary = base_summary(cfg);
  json runs = json::array();
  for (EnvelopeKind env : cfg.protocol.envelopes) {
    const std::string name = env == EnvelopeKind::abrupt ? "abrupt" : "gaussian";
    ProtocolRun pr = protocol_once(spec, cfg.protocol, env, cfg.run, true);
    json steps = json::array();
    for (size_t l = 0; l < pr.report.steps.size(); ++l) {
      const auto& s = pr.report.steps[l];
      json js{{"index", l + 1},
              {"j", s.request.j},
              {"from", {s.request.k1, s.request.k2}},
              {"omega_rad_s", s.drive.omega},
              {"omega_over_omega_c", s.drive.omega / spec.omega_c},
              {"t_start_s", s.drive.t_start},
              {"duration_s", s.drive.duration},
              {"rabi_rate_rad_s", s.rabi_rate},
              {"fidelity", pr.report.fidelities[l]}};
      if (env == EnvelopeKind::gaussian) {
        js["sigma_s"] = s.drive.envelope.sigma;
        js["mu"] = s.drive.envelope.mu;
      }
      steps.push_back(js);
    }
    json run{{"envelope", name}, {"steps", steps}};
    if (cfg.run.convergence_check) {
      SystemSpec big = spec;
      big.n_max += 10;
      const ProtocolRun p2 = protocol_once(big, cfg.protocol, env, cfg.run, false);
      double diff = 0.0;
      for (size_t l = 0; l < p2.report.fidelities.size(); ++l)
        diff = std::max(diff, std::abs(p2.report.fidelities[l] - pr.report.fidelities[l]));
      run["convergence"] = json{{"n_max", big.n_max}, {"max_fidelity_change", diff}};
    }
    runs.push_back(run);

    // populations on the union of the ideal supports
    std::vector<int> cols;
    for (const Vec& tgt : pr.report.targets)
      for (int a = 0; a < tgt.size(); ++a)
        if (std::abs(tgt(a)) > 1e-12 && std::find(cols.begin(), cols.end(), a) == cols.end()) cols.push_back(a);
    if (pr.report.initial.size()) {
      Eigen::Index a0;
      pr.report.initial.cwiseAbs().maxCoeff(&a0);
      if (std::find(cols.begin(), cols.end(), static_cast<int>(a0)) == cols.end()) cols.insert(cols.begin(), a0);
    }
    std::ostringstream csv;
    csv << "t_seconds";
    for (int a : cols) {
      auto [k1, k2, n] = idx.triple(a);
      csv << ',' << column_name(k1, k2, n);
    }
    csv << ",norm\n";
    for (size_t i = 0; i < pr.times.size(); ++i) {
      csv << format_double(pr.times[i]);
      for (int a : cols) csv << ',' << format_double(std::norm(pr.states[i](a)));
      csv << ',' << format_double(pr.states[i].norm()) << '\n';
    }
    art.files.push_back({"protocol_" + name + ".csv", csv.str()});
  }
  art.summary["runs"] = runs;
  art.summary["truncation"] = truncation_json(spec);
  art.summary["wall_time_s"] = seconds_since(t0);
  return art;
}

RunArtifact run_sweep(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const SweepConfig& sc = cfg.sweep;
  SweepSettings set;
  set.eta_mode = sc.eta_mode;
  set.eta_fixed = sc.eta_fixed;
  set.duration = sc.duration;
  set.samples = sc.samples;
  set.dt_max = cfg.run.dt_max;
  set.workers = cfg.run.workers;
  const Vec init = basis_state(cfg.system, sc.initial.k1, sc.initial.k2, sc.initial.n);
  const SweepGrid g = sweep_map(cfg.system, sc.omega.values(), sc.eta.values(), init, set);
  if (g.failures > 0) std::cerr << "warning: " << g.failures << " sweep cells failed and are reported as nan\n";

  std::ostringstream csv;
  csv << "omega_rad_s\\eta";
  for (double e : g.eta_values) csv << ',' << format_double(e);
  csv << '\n';
  for (size_t i = 0; i < g.omega_values.size(); ++i) {
    csv << format_double(g.omega_values[i]);
    for (size_t k = 0; k < g.eta_values.size(); ++k) csv << ',' << format_double(g.result(i, k));
    csv << '\n';
  }
  RunArtifact art;
  art.summary = base_summary(cfg);
  art.summary["shape"] = {g.omega_values.size(), g.eta_values.size()};
  art.summary["failures"] = g.failures;
  art.summary["truncation"] = truncation_json(cfg.system);
  art.summary["wall_time_s"] = seconds_since(t0);
  art.files.push_back({"sweep.csv", csv.str()});
  return art;
}

namespace {

struct DissResult {
  std::vector<double> times;
  std::vector<double> p_initial, p_target, trace;
  double fidelity = 0.0;
  double min_eigenvalue = 0.0;
  double transfer_time = 0.0;
};

DissResult dissipative_once(const SystemSpec& spec, const DissipativeConfig& dc, const presets::TransitionCase& tc,
                            const DressedBasis& db, const RunConfig& run) {
  const RotatingModel model = build_rotating_model(spec);
  const DriveStep step = presets::transition_step(spec, tc, dc.eta, dc.eta);
  DissResult r;
  r.transfer_time = presets::transfer_time(spec, tc, dc.eta);
  r.times = linspace(0.0, r.transfer_time, std::max(run.samples, 2));
  const Vec psi0 = basis_state(spec, tc.initial.first, tc.initial.second, 0);
  const Vec tgt = basis_state(spec, tc.target.first, tc.target.second, 0);
  MasterOptions mo;
  mo.dt_max = run.dt_max;
  mo.split_max = dc.split_max;
  const auto rhos = propagate_master(model, step, db, psi0 * psi0.adjoint(), r.times, mo);
  const QuantumState target{tgt, Frame::transformed};
  const QuantumState initial{psi0, Frame::transformed};
  for (const Mat& rho : rhos) {
    const DensityMatrix dm{rho, Frame::transformed};
    r.p_initial.push_back(fidelity(initial, dm));
    r.p_target.push_back(fidelity(target, dm));
    r.trace.push_back(rho.trace().real());
  }
  r.fidelity = r.p_target.back();
  r.min_eigenvalue = hermitian_eig(rhos.back()).values.minCoeff();
  return r;
}

}  // namespace

RunArtifact run_dissipative(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const SystemSpec& spec = cfg.system;
  const DissipativeConfig& dc = cfg.dissipative;
  const int nt = static_cast<int>(dc.transitions.size()), nc = static_cast<int>(dc.columns.size());

  auto evaluate = [&](const SystemSpec& s, double threshold) {
    std::vector<DressedBasis> bases(nc);
    parallel_for(nc, cfg.run.workers, [&](int c) {
      bases[c] = build_dressed_basis(s, dc.kappa, dc.columns[c].gamma1, dc.columns[c].gamma2, dc.convention, threshold);
    });
    std::vector<DissResult> res(nt * nc);
    parallel_for(nt * nc, cfg.run.workers, [&](int i) {
      res[i] = dissipative_once(s, dc, dc.transitions[i / nc], bases[i % nc], cfg.run);
    });
    return res;
  };
  const std::vector<DissResult> res = evaluate(spec, dc.threshold_rel);

  RunArtifact art;
  art.summary = base_summary(cfg);
  json rows = json::array();
  for (int t = 0; t < nt; ++t) {
    json fids = json::array(), mins = json::array();
    for (int c = 0; c < nc; ++c) {
      fids.push_back(res[t * nc + c].fidelity);
      mins.push_back(res[t * nc + c].min_eigenvalue);
    }
    rows.push_back(json{{"label", dc.transitions[t].label},
                        {"transfer_time_s", res[t * nc].transfer_time},
                        {"fidelity", fids},
                        {"min_eigenvalue", mins}});
    for (int c = 0; c < nc; ++c) {
      const DissResult& r = res[t * nc + c];
      std::ostringstream csv;
      const auto& tc = dc.transitions[t];
      csv << "t_seconds," << column_name(tc.initial.first, tc.initial.second, 0) << ','
          << column_name(tc.target.first, tc.target.second, 0) << ",trace\n";
      for (size_t i = 0; i < r.times.size(); ++i)
        csv << format_double(r.times[i]) << ',' << format_double(r.p_initial[i]) << ','
            << format_double(r.p_target[i]) << ',' << format_double(r.trace[i]) << '\n';
      art.files.push_back({"dissipative_" + std::to_string(t) + "_" + std::to_string(c) + ".csv", csv.str()});
    }
  }
  art.summary["transitions"] = rows;
  art.summary["truncation"] = truncation_json(spec);
  if (cfg.run.convergence_check) {
    SystemSpec big = spec;
    big.n_max += 10;
    const auto res2 = evaluate(big, 0.0);
    double diff = 0.0;
    for (size_t i = 0; i < res.size(); ++i) diff = std::max(diff, std::abs(res[i].fidelity - res2[i].fidelity));
    art.summary["convergence"] = json{{"n_max", big.n_max}, {"threshold_rel", 0.0}, {"max_fidelity_change", diff}};
  }
  art.summary["wall_time_s"] = seconds_since(t0);
  return art;
}

RunArtifact run_config(const ExperimentConfig& cfg) {
  if (cfg.command == "simulate") return run_simulate(cfg);
  if (cfg.command == "protocol") return run_protocol(cfg);
  if (cfg.command == "sweep") return run_sweep(cfg);
  if (cfg.command == "dissipative") return run_dissipative(cfg);
  throw ConfigError("<command>", "unknown command " + cfg.command);
}

void write_artifact(const RunArtifact& art, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    f << text;
  };
  put("summary.json", art.summary.dump(2) + "\n");
  for (const auto& [name, text] : art.files) put(name, text);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ProtocolError*>(&e)) return 4;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidParameter*>(&e) ||
      dynamic_cast<const WrongMode*>(&e) || dynamic_cast<const ContractViolation*>(&e))
    return 2;
  return 3;
}

}  // namespace dicke
