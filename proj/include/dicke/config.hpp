#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dicke/analysis.hpp"
#include "dicke/presets.hpp"

namespace dicke {

// Schema violation; `path` points at the offending field, e.g. "system.g1.unit".
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path(path) {}
  std::string path;
};

struct StateLabel {
  int k1 = 0, k2 = 0, n = 0;
};

struct LinearGrid {
  double start = 0.0, stop = 0.0;
  int count = 1;
  std::vector<double> values() const;
};

struct SimulateConfig {
  DriveStep drive;  // duration doubles as the end of the time grid
  StateLabel initial;
  std::vector<StateLabel> track;
};

struct ProtocolConfig {
  double eta1 = 0.0, eta2 = 0.0;
  std::pair<int, int> initial{0, 0};
  std::vector<EnvelopeKind> envelopes{EnvelopeKind::abrupt};
  double mu = 1.0954451150103321;
  std::vector<TransitionRequest> steps;  // envelope field is overwritten per run
  FrameHandoff handoff = FrameHandoff::interaction;
};

struct SweepConfig {
  LinearGrid omega;  // rad/s
  LinearGrid eta;
  SweepSettings::EtaMode eta_mode = SweepSettings::EtaMode::joint;
  double eta_fixed = 0.0;
  double duration = 0.0;  // seconds
  int samples = 400;
  StateLabel initial;
};

struct DissipationColumn {
  double gamma1 = 0.0, gamma2 = 0.0;  // rad/s
};

struct DissipativeConfig {
  double eta = 0.0;
  double kappa = 0.0;  // rad/s
  std::vector<DissipationColumn> columns;
  JumpConvention convention = JumpConvention::mapped;
  double threshold_rel = 1e-12;
  double split_max = 0.0;  // seconds; 0 selects the solver default
  std::vector<presets::TransitionCase> transitions;
};

struct RunConfig {
  double dt_max = 0.0;  // seconds; 0 selects the drive-resolving default
  int workers = 1;
  int samples = 201;    // timeseries rows for simulate/protocol/dissipative
  bool convergence_check = false;
};

struct ExperimentConfig {
  std::string command;  // simulate | protocol | sweep | dissipative
  std::string preset;   // informational
  SystemSpec system;
  SimulateConfig simulate;
  ProtocolConfig protocol;
  SweepConfig sweep;
  DissipativeConfig dissipative;
  RunConfig run;
  std::string out_dir = ".";
};

// Strict parse. Unknown keys and missing required keys raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& command);
ExperimentConfig parse_config_text(const std::string& text, const std::string& command);

// Fully resolved form: all defaults present, frequencies in rad/s, times in seconds.
nlohmann::json resolved_json(const ExperimentConfig& cfg);
std::string dump_resolved(const ExperimentConfig& cfg);

// Ready-made configurations; throws ConfigError for an unknown name.
ExperimentConfig preset_config(const std::string& name);
std::string preset_command(const std::string& name);

}  // namespace dicke
