#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dicke/config.hpp"

namespace dicke {

struct RunArtifact {
  nlohmann::json summary;
  // (file name, contents) pairs, written under the output directory
  std::vector<std::pair<std::string, std::string>> files;
};

RunArtifact run_simulate(const ExperimentConfig& cfg);
RunArtifact run_protocol(const ExperimentConfig& cfg);
RunArtifact run_sweep(const ExperimentConfig& cfg);
RunArtifact run_dissipative(const ExperimentConfig& cfg);
RunArtifact run_config(const ExperimentConfig& cfg);  // dispatch on cfg.command

// summary.json plus every file of the artifact.
void write_artifact(const RunArtifact& artifact, const std::string& dir);

// Exit-code contract: 0 ok, 2 configuration, 3 integration, 4 protocol.
int exit_code_for(const std::exception& e);

// Doubles in CSV files use 17 significant digits.
std::string format_double(double v);

}  // namespace dicke
