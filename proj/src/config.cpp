#include "dicke/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "dicke/errors.hpp"

namespace dicke {

using nlohmann::json;

std::vector<double> LinearGrid::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return v;
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  require_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(join(path, it.key()), "unknown key");
}

const json& required(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

double num_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? as_number(j.at(key), join(path, key)) : fallback;
}

int int_or(const json& j, const std::string& key, const std::string& path, int fallback) {
  return j.contains(key) ? as_int(j.at(key), join(path, key)) : fallback;
}

enum class Dim { frequency, time };

// {"value": x, "unit": u}. omega_c is needed for the omega_c-relative units.
double quantity(const json& j, const std::string& path, Dim dim, double omega_c) {
  check_keys(j, path, {"value", "unit"});
  const double v = as_number(required(j, "value", path), join(path, "value"));
  const std::string u = as_string(required(j, "unit", path), join(path, "unit"));
  if (dim == Dim::frequency) {
    if (u == "rad/s") return v;
    if (u == "Hz") return 2.0 * std::numbers::pi * v;
    if (u == "omega_c") {
      if (!(omega_c > 0)) throw ConfigError(join(path, "unit"), "omega_c units are not available here");
      return v * omega_c;
    }
    throw ConfigError(join(path, "unit"), "frequency unit must be one of rad/s, Hz, omega_c");
  }
  if (u == "s") return v;
  if (u == "us") return v * 1e-6;
  if (u == "ns") return v * 1e-9;
  if (u == "1/omega_c") {
    if (!(omega_c > 0)) throw ConfigError(join(path, "unit"), "1/omega_c units are not available here");
    return v / omega_c;
  }
  throw ConfigError(join(path, "unit"), "time unit must be one of s, us, ns, 1/omega_c");
}

json freq_json(double v) { return json{{"value", v}, {"unit", "rad/s"}}; }
json time_json(double v) { return json{{"value", v}, {"unit", "s"}}; }

std::pair<int, int> pair_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [k1, k2]");
  return {as_int(j[0], join(path, 0)), as_int(j[1], join(path, 1))};
}

StateLabel state_of(const json& j, const std::string& path) {
  check_keys(j, path, {"k1", "k2", "n"});
  StateLabel s;
  s.k1 = int_or(j, "k1", path, 0);
  s.k2 = int_or(j, "k2", path, 0);
  s.n = int_or(j, "n", path, 0);
  if (s.k1 < 0 || s.k2 < 0 || s.n < 0) throw ConfigError(path, "indices must be >= 0");
  return s;
}

json state_json(const StateLabel& s) { return json{{"k1", s.k1}, {"k2", s.k2}, {"n", s.n}}; }

void check_state(const StateLabel& s, const SystemSpec& spec, const std::string& path) {
  if (s.k1 >= spec.ensemble_dim(1) || s.k2 >= spec.ensemble_dim(2) || s.n > spec.n_max)
    throw ConfigError(path, "state lies outside the truncated basis");
}

SystemSpec parse_system(const json& j, const std::string& path) {
  check_keys(j, path, {"mode", "N1", "N2", "omega_c", "eps1", "eps2", "g1", "g2", "omega_q1", "omega_q2", "q0",
                       "n_max", "m_max"});
  SystemSpec s;
  const std::string mode = j.contains("mode") ? as_string(j.at("mode"), join(path, "mode")) : "finite_dicke";
  if (mode == "finite_dicke") s.mode = Mode::finite_dicke;
  else if (mode == "magnon_hp") s.mode = Mode::magnon_hp;
  else throw ConfigError(join(path, "mode"), "must be finite_dicke or magnon_hp");
  s.N1 = as_int(required(j, "N1", path), join(path, "N1"));
  s.N2 = as_int(required(j, "N2", path), join(path, "N2"));
  s.omega_c = quantity(required(j, "omega_c", path), join(path, "omega_c"), Dim::frequency, 0.0);
  auto f = [&](const char* key) { return quantity(required(j, key, path), join(path, key), Dim::frequency, s.omega_c); };
  s.eps1 = f("eps1");
  s.eps2 = f("eps2");
  s.g1 = f("g1");
  s.g2 = f("g2");
  s.omega_q1 = f("omega_q1");
  s.omega_q2 = f("omega_q2");
  s.q0 = int_or(j, "q0", path, -1);
  s.n_max = int_or(j, "n_max", path, 30);
  s.m_max = int_or(j, "m_max", path, 4);
  try {
    s.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(path, e.what());
  }
  return s;
}

json system_json(const SystemSpec& s) {
  return json{{"mode", s.mode == Mode::finite_dicke ? "finite_dicke" : "magnon_hp"},
              {"N1", s.N1},
              {"N2", s.N2},
              {"omega_c", freq_json(s.omega_c)},
              {"eps1", freq_json(s.eps1)},
              {"eps2", freq_json(s.eps2)},
              {"g1", freq_json(s.g1)},
              {"g2", freq_json(s.g2)},
              {"omega_q1", freq_json(s.omega_q1)},
              {"omega_q2", freq_json(s.omega_q2)},
              {"q0", s.q0},
              {"n_max", s.n_max},
              {"m_max", s.m_max}};
}

SimulateConfig parse_simulate(const json& j, const std::string& path, const SystemSpec& spec) {
  check_keys(j, path, {"drive", "initial", "track"});
  SimulateConfig c;
  const std::string dp = join(path, "drive");
  const json& d = required(j, "drive", path);
  check_keys(d, dp, {"omega", "resonance", "eta1", "eta2", "duration"});
  if (d.contains("omega") == d.contains("resonance"))
    throw ConfigError(dp, "give exactly one of omega or resonance");
  if (d.contains("omega")) {
    c.drive.omega = quantity(d.at("omega"), join(dp, "omega"), Dim::frequency, spec.omega_c);
  } else {
    const std::string rp = join(dp, "resonance");
    const json& r = d.at("resonance");
    check_keys(r, rp, {"j", "k1", "k2"});
    const int jj = as_int(required(r, "j", rp), join(rp, "j"));
    if (jj != 1 && jj != 2) throw ConfigError(join(rp, "j"), "must be 1 or 2");
    try {
      c.drive.omega = drive_frequency(
          transition_delta(jj, int_or(r, "k1", rp, 0), int_or(r, "k2", rp, 0), spec), spec);
    } catch (const InvalidParameter& e) {
      throw ConfigError(rp, e.what());
    }
  }
  if (!(c.drive.omega > 0)) throw ConfigError(dp, "drive frequency must be positive");
  c.drive.eta1 = num_or(d, "eta1", dp, 0.0);
  c.drive.eta2 = num_or(d, "eta2", dp, 0.0);
  c.drive.duration = quantity(required(d, "duration", dp), join(dp, "duration"), Dim::time, spec.omega_c);
  if (c.drive.duration < 0) throw ConfigError(join(dp, "duration"), "must be >= 0");
  if (j.contains("initial")) c.initial = state_of(j.at("initial"), join(path, "initial"));
  check_state(c.initial, spec, join(path, "initial"));
  if (j.contains("track")) {
    const json& t = j.at("track");
    if (!t.is_array() || t.empty()) throw ConfigError(join(path, "track"), "expected a non-empty list of states");
    for (size_t i = 0; i < t.size(); ++i) {
      c.track.push_back(state_of(t[i], join(join(path, "track"), i)));
      check_state(c.track.back(), spec, join(join(path, "track"), i));
    }
  } else {
    c.track = {c.initial};
  }
  return c;
}

json simulate_json(const SimulateConfig& c) {
  json track = json::array();
  for (const auto& s : c.track) track.push_back(state_json(s));
  return json{{"drive",
               {{"omega", freq_json(c.drive.omega)},
                {"eta1", c.drive.eta1},
                {"eta2", c.drive.eta2},
                {"duration", time_json(c.drive.duration)}}},
              {"initial", state_json(c.initial)},
              {"track", track}};
}

EnvelopeKind envelope_of(const json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "abrupt") return EnvelopeKind::abrupt;
  if (s == "gaussian") return EnvelopeKind::gaussian;
  throw ConfigError(path, "envelope must be abrupt or gaussian");
}

const char* envelope_name(EnvelopeKind e) { return e == EnvelopeKind::abrupt ? "abrupt" : "gaussian"; }

ProtocolConfig parse_protocol(const json& j, const std::string& path) {
  check_keys(j, path, {"eta1", "eta2", "initial", "envelopes", "mu", "handoff", "steps"});
  ProtocolConfig c;
  c.eta1 = num_or(j, "eta1", path, 0.0);
  c.eta2 = num_or(j, "eta2", path, 0.0);
  if (j.contains("initial")) c.initial = pair_of(j.at("initial"), join(path, "initial"));
  if (j.contains("envelopes")) {
    const json& e = j.at("envelopes");
    const std::string ep = join(path, "envelopes");
    if (!e.is_array() || e.empty()) throw ConfigError(ep, "expected a non-empty list");
    c.envelopes.clear();
    for (size_t i = 0; i < e.size(); ++i) c.envelopes.push_back(envelope_of(e[i], join(ep, i)));
  }
  c.mu = num_or(j, "mu", path, c.mu);
  if (!(c.mu > 1)) throw ConfigError(join(path, "mu"), "must exceed 1");
  if (j.contains("handoff")) {
    const std::string h = as_string(j.at("handoff"), join(path, "handoff"));
    if (h == "interaction") c.handoff = FrameHandoff::interaction;
    else if (h == "transformed") c.handoff = FrameHandoff::transformed;
    else throw ConfigError(join(path, "handoff"), "must be interaction or transformed");
  }
  const json& steps = required(j, "steps", path);
  const std::string sp = join(path, "steps");
  if (!steps.is_array()) throw ConfigError(sp, "expected a list");
  for (size_t i = 0; i < steps.size(); ++i) {
    const std::string p = join(sp, i);
    check_keys(steps[i], p, {"j", "from", "area"});
    TransitionRequest r;
    r.j = as_int(required(steps[i], "j", p), join(p, "j"));
    if (r.j != 1 && r.j != 2) throw ConfigError(join(p, "j"), "must be 1 or 2");
    std::tie(r.k1, r.k2) = pair_of(required(steps[i], "from", p), join(p, "from"));
    const std::string a = as_string(required(steps[i], "area", p), join(p, "area"));
    if (a == "quarter_pi") r.area = Area::quarter_pi;
    else if (a == "half_pi") r.area = Area::half_pi;
    else throw ConfigError(join(p, "area"), "must be quarter_pi or half_pi");
    r.mu = c.mu;
    c.steps.push_back(r);
  }
  return c;
}

json protocol_json(const ProtocolConfig& c) {
  json env = json::array();
  for (auto e : c.envelopes) env.push_back(envelope_name(e));
  json steps = json::array();
  for (const auto& r : c.steps)
    steps.push_back(json{{"j", r.j},
                         {"from", {r.k1, r.k2}},
                         {"area", r.area == Area::quarter_pi ? "quarter_pi" : "half_pi"}});
  return json{{"eta1", c.eta1},
              {"eta2", c.eta2},
              {"initial", {c.initial.first, c.initial.second}},
              {"envelopes", env},
              {"mu", c.mu},
              {"handoff", c.handoff == FrameHandoff::interaction ? "interaction" : "transformed"},
              {"steps", steps}};
}

LinearGrid grid_of(const json& j, const std::string& path, bool frequency, double omega_c) {
  check_keys(j, path, {"start", "stop", "count"});
  LinearGrid g;
  if (frequency) {
    g.start = quantity(required(j, "start", path), join(path, "start"), Dim::frequency, omega_c);
    g.stop = quantity(required(j, "stop", path), join(path, "stop"), Dim::frequency, omega_c);
  } else {
    g.start = as_number(required(j, "start", path), join(path, "start"));
    g.stop = as_number(required(j, "stop", path), join(path, "stop"));
  }
  g.count = as_int(required(j, "count", path), join(path, "count"));
  if (g.count < 1) throw ConfigError(join(path, "count"), "must be >= 1");
  return g;
}

SweepConfig parse_sweep(const json& j, const std::string& path, const SystemSpec& spec) {
  check_keys(j, path, {"omega", "eta", "eta_mode", "eta_fixed", "duration", "samples", "initial"});
  SweepConfig c;
  c.omega = grid_of(required(j, "omega", path), join(path, "omega"), true, spec.omega_c);
  if (!(std::min(c.omega.start, c.omega.stop) > 0)) throw ConfigError(join(path, "omega"), "frequencies must be positive");
  c.eta = grid_of(required(j, "eta", path), join(path, "eta"), false, spec.omega_c);
  if (j.contains("eta_mode")) {
    const std::string m = as_string(j.at("eta_mode"), join(path, "eta_mode"));
    if (m == "joint") c.eta_mode = SweepSettings::EtaMode::joint;
    else if (m == "only1") c.eta_mode = SweepSettings::EtaMode::only1;
    else if (m == "only2") c.eta_mode = SweepSettings::EtaMode::only2;
    else throw ConfigError(join(path, "eta_mode"), "must be joint, only1 or only2");
  }
  c.eta_fixed = num_or(j, "eta_fixed", path, 0.0);
  c.duration = quantity(required(j, "duration", path), join(path, "duration"), Dim::time, spec.omega_c);
  if (!(c.duration > 0)) throw ConfigError(join(path, "duration"), "must be positive");
  c.samples = int_or(j, "samples", path, 400);
  if (c.samples < 2) throw ConfigError(join(path, "samples"), "must be >= 2");
  if (j.contains("initial")) c.initial = state_of(j.at("initial"), join(path, "initial"));
  check_state(c.initial, spec, join(path, "initial"));
  return c;
}

json sweep_json(const SweepConfig& c) {
  const char* mode = c.eta_mode == SweepSettings::EtaMode::joint   ? "joint"
                     : c.eta_mode == SweepSettings::EtaMode::only1 ? "only1"
                                                                   : "only2";
  return json{{"omega", {{"start", freq_json(c.omega.start)}, {"stop", freq_json(c.omega.stop)}, {"count", c.omega.count}}},
              {"eta", {{"start", c.eta.start}, {"stop", c.eta.stop}, {"count", c.eta.count}}},
              {"eta_mode", mode},
              {"eta_fixed", c.eta_fixed},
              {"duration", time_json(c.duration)},
              {"samples", c.samples},
              {"initial", state_json(c.initial)}};
}

std::string ket_label(std::pair<int, int> k) {
  return "|" + std::to_string(k.first) + "," + std::to_string(k.second) + ">";
}

DissipativeConfig parse_dissipative(const json& j, const std::string& path, const SystemSpec& spec) {
  check_keys(j, path, {"eta", "kappa", "gamma1", "gamma2", "columns", "convention", "threshold_rel", "split_max",
                       "transitions"});
  DissipativeConfig c;
  c.eta = as_number(required(j, "eta", path), join(path, "eta"));
  c.kappa = quantity(required(j, "kappa", path), join(path, "kappa"), Dim::frequency, spec.omega_c);
  const bool single = j.contains("gamma1") || j.contains("gamma2");
  if (single && j.contains("columns")) throw ConfigError(join(path, "columns"), "give either gamma1/gamma2 or columns");
  if (j.contains("columns")) {
    const json& cols = j.at("columns");
    const std::string cp = join(path, "columns");
    if (!cols.is_array() || cols.empty()) throw ConfigError(cp, "expected a non-empty list");
    for (size_t i = 0; i < cols.size(); ++i) {
      const std::string p = join(cp, i);
      check_keys(cols[i], p, {"gamma1", "gamma2"});
      c.columns.push_back({quantity(required(cols[i], "gamma1", p), join(p, "gamma1"), Dim::frequency, spec.omega_c),
                           quantity(required(cols[i], "gamma2", p), join(p, "gamma2"), Dim::frequency, spec.omega_c)});
    }
  } else {
    c.columns.push_back({quantity(required(j, "gamma1", path), join(path, "gamma1"), Dim::frequency, spec.omega_c),
                         quantity(required(j, "gamma2", path), join(path, "gamma2"), Dim::frequency, spec.omega_c)});
  }
  if (c.kappa < 0) throw ConfigError(join(path, "kappa"), "must be >= 0");
  for (const auto& col : c.columns)
    if (col.gamma1 < 0 || col.gamma2 < 0) throw ConfigError(join(path, "columns"), "rates must be >= 0");
  if (j.contains("convention")) {
    const std::string s = as_string(j.at("convention"), join(path, "convention"));
    if (s == "mapped") c.convention = JumpConvention::mapped;
    else if (s == "bare") c.convention = JumpConvention::bare;
    else throw ConfigError(join(path, "convention"), "must be mapped or bare");
  }
  c.threshold_rel = num_or(j, "threshold_rel", path, c.threshold_rel);
  if (c.threshold_rel < 0) throw ConfigError(join(path, "threshold_rel"), "must be >= 0");
  if (j.contains("split_max"))
    c.split_max = quantity(j.at("split_max"), join(path, "split_max"), Dim::time, spec.omega_c);
  const json& tr = required(j, "transitions", path);
  const std::string tp = join(path, "transitions");
  if (!tr.is_array() || tr.empty()) throw ConfigError(tp, "expected a non-empty list");
  for (size_t i = 0; i < tr.size(); ++i) {
    const std::string p = join(tp, i);
    check_keys(tr[i], p, {"j", "lower", "initial", "target", "label"});
    presets::TransitionCase t;
    t.j = as_int(required(tr[i], "j", p), join(p, "j"));
    if (t.j != 1 && t.j != 2) throw ConfigError(join(p, "j"), "must be 1 or 2");
    t.lower = pair_of(required(tr[i], "lower", p), join(p, "lower"));
    t.initial = pair_of(required(tr[i], "initial", p), join(p, "initial"));
    t.target = pair_of(required(tr[i], "target", p), join(p, "target"));
    t.label = tr[i].contains("label") ? as_string(tr[i].at("label"), join(p, "label")) : ket_label(t.target);
    for (auto [key, k] : {std::pair{"initial", t.initial}, std::pair{"target", t.target}, std::pair{"lower", t.lower}})
      check_state({k.first, k.second, 0}, spec, join(p, key));
    c.transitions.push_back(t);
  }
  return c;
}

json dissipative_json(const DissipativeConfig& c) {
  json cols = json::array();
  for (const auto& col : c.columns) cols.push_back(json{{"gamma1", freq_json(col.gamma1)}, {"gamma2", freq_json(col.gamma2)}});
  json tr = json::array();
  for (const auto& t : c.transitions)
    tr.push_back(json{{"j", t.j},
                      {"lower", {t.lower.first, t.lower.second}},
                      {"initial", {t.initial.first, t.initial.second}},
                      {"target", {t.target.first, t.target.second}},
                      {"label", t.label}});
  return json{{"eta", c.eta},
              {"kappa", freq_json(c.kappa)},
              {"columns", cols},
              {"convention", c.convention == JumpConvention::mapped ? "mapped" : "bare"},
              {"threshold_rel", c.threshold_rel},
              {"split_max", time_json(c.split_max)},
              {"transitions", tr}};
}

RunConfig parse_run(const json& j, const std::string& path, double omega_c) {
  check_keys(j, path, {"dt_max", "workers", "samples", "convergence_check"});
  RunConfig r;
  if (j.contains("dt_max")) r.dt_max = quantity(j.at("dt_max"), join(path, "dt_max"), Dim::time, omega_c);
  if (r.dt_max < 0) throw ConfigError(join(path, "dt_max"), "must be >= 0");
  r.workers = int_or(j, "workers", path, 1);
  if (r.workers < 1) throw ConfigError(join(path, "workers"), "must be >= 1");
  r.samples = int_or(j, "samples", path, r.samples);
  if (r.samples < 1) throw ConfigError(join(path, "samples"), "must be >= 1");
  if (j.contains("convergence_check")) r.convergence_check = as_bool(j.at("convergence_check"), join(path, "convergence_check"));
  return r;
}

json run_json(const RunConfig& r) {
  return json{{"dt_max", time_json(r.dt_max)},
              {"workers", r.workers},
              {"samples", r.samples},
              {"convergence_check", r.convergence_check}};
}

}  // namespace

ExperimentConfig parse_config(const json& j, const std::string& command) {
  static const std::set<std::string> commands{"simulate", "protocol", "sweep", "dissipative"};
  if (!commands.count(command)) throw ConfigError("<command>", "unknown command " + command);
  check_keys(j, "", {"preset", "system", "run", "outputs", command});
  ExperimentConfig c;
  c.command = command;
  if (j.contains("preset")) c.preset = as_string(j.at("preset"), "preset");
  c.system = parse_system(required(j, "system", ""), "system");
  const json& body = required(j, command, "");
  if (command == "simulate") c.simulate = parse_simulate(body, command, c.system);
  else if (command == "protocol") c.protocol = parse_protocol(body, command);
  else if (command == "sweep") c.sweep = parse_sweep(body, command, c.system);
  else c.dissipative = parse_dissipative(body, command, c.system);
  if (j.contains("run")) c.run = parse_run(j.at("run"), "run", c.system.omega_c);
  if (j.contains("outputs")) {
    check_keys(j.at("outputs"), "outputs", {"dir"});
    if (j.at("outputs").contains("dir")) c.out_dir = as_string(j.at("outputs").at("dir"), "outputs.dir");
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& command) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, command);
}

json resolved_json(const ExperimentConfig& c) {
  json j{{"preset", c.preset}, {"system", system_json(c.system)}, {"run", run_json(c.run)}, {"outputs", {{"dir", c.out_dir}}}};
  if (c.command == "simulate") j["simulate"] = simulate_json(c.simulate);
  else if (c.command == "protocol") j["protocol"] = protocol_json(c.protocol);
  else if (c.command == "sweep") j["sweep"] = sweep_json(c.sweep);
  else if (c.command == "dissipative") j["dissipative"] = dissipative_json(c.dissipative);
  return j;
}

std::string dump_resolved(const ExperimentConfig& c) { return resolved_json(c).dump(2); }

std::string preset_command(const std::string& name) {
  if (name == "table1" || name == "table2") return "protocol";
  if (name == "fig2") return "sweep";
  if (name == "table3" || name == "table4") return "dissipative";
  throw ConfigError("preset", "unknown preset " + name);
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.command = preset_command(name);
  c.preset = name;
  if (c.command == "protocol") {
    const auto p = name == "table1" ? presets::table1(EnvelopeKind::abrupt) : presets::table2(EnvelopeKind::abrupt);
    c.system = p.spec;
    c.protocol.eta1 = p.eta1;
    c.protocol.eta2 = p.eta2;
    c.protocol.envelopes = {EnvelopeKind::abrupt, EnvelopeKind::gaussian};
    c.protocol.steps = p.requests;
  } else if (c.command == "sweep") {
    // coarse sweep map: the cavity displacement is converged well below n_max = 30
    c.system = presets::finite_system(8);
    const double wc = c.system.omega_c;
    c.sweep.omega = {3.0 * wc, 6.2 * wc, 121};
    c.sweep.eta = {0.0, 4.0, 61};
    c.sweep.initial = {1, 1, 0};
    double slowest = 0.0;
    for (const auto& t : presets::selective_cases())
      slowest = std::max(slowest, 4.0 * presets::transfer_time(c.system, t, 1.09));
    c.sweep.duration = 3.0 * slowest;
  } else {
    const auto d = name == "table3" ? presets::table3() : presets::table4();
    c.system = d.spec;
    c.dissipative.eta = d.eta;
    c.dissipative.kappa = d.kappa;
    for (double g : d.gammas) c.dissipative.columns.push_back({g, g});
    c.dissipative.transitions = d.cases;
  }
  return c;
}

}  // namespace dicke
