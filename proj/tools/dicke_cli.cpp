// Command-line front end: simulate | protocol | sweep | dissipative | presets.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dicke/errors.hpp"
#include "dicke/runner.hpp"

namespace {

struct Flags {
  std::string config, preset, out;
  int workers = 0;
  bool convergence = false;
  int n_max = -1;
  double dt_max = 0.0;  // units of 1/omega_c
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON experiment config");
  sub->add_option("--preset", f.preset, "named preset used instead of --config");
  sub->add_option("--out", f.out, "output directory (overrides outputs.dir)");
  sub->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--convergence-check", f.convergence, "repeat with n_max + 10 and report the change");
  sub->add_option("--n-max", f.n_max, "cavity Fock truncation");
  sub->add_option("--dt-max", f.dt_max, "largest integrator step, in units of 1/omega_c");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dicke::ConfigError("--config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

dicke::ExperimentConfig load(const std::string& command, const Flags& f) {
  if (f.config.empty() == f.preset.empty()) throw dicke::ConfigError("<cli>", "give exactly one of --config or --preset");
  dicke::ExperimentConfig cfg;
  if (!f.config.empty()) {
    cfg = dicke::parse_config_text(read_file(f.config), command);
  } else {
    if (dicke::preset_command(f.preset) != command)
      throw dicke::ConfigError("--preset", f.preset + " belongs to the " + dicke::preset_command(f.preset) + " command");
    cfg = dicke::preset_config(f.preset);
  }
  if (f.n_max >= 0) {
    if (f.n_max < 1) throw dicke::ConfigError("--n-max", "must be >= 1");
    cfg.system.n_max = f.n_max;
  }
  if (f.dt_max < 0) throw dicke::ConfigError("--dt-max", "must be positive");
  if (f.dt_max > 0) cfg.run.dt_max = f.dt_max / cfg.system.omega_c;
  if (f.workers > 0) cfg.run.workers = f.workers;
  if (f.convergence) cfg.run.convergence_check = true;
  if (!f.out.empty()) cfg.out_dir = f.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective-resonance simulator for two Dicke ensembles in a modulated cavity"};
  app.require_subcommand(1);
  Flags flags;
  std::string command;
  for (const char* name : {"simulate", "protocol", "sweep", "dissipative"}) {
    auto* sub = app.add_subcommand(name);
    add_flags(sub, flags);
    sub->callback([&command, name] { command = name; });
  }
  std::string show;
  auto* presets_cmd = app.add_subcommand("presets", "list presets, or print one as a resolved config");
  presets_cmd->add_option("--preset", show, "preset to print");
  presets_cmd->callback([&command] { command = "presets"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (command == "presets") {
      if (show.empty()) {
        for (const auto& n : dicke::presets::names()) std::cout << n << '\t' << dicke::preset_command(n) << '\n';
      } else {
        std::cout << dicke::dump_resolved(dicke::preset_config(show)) << '\n';
      }
      return 0;
    }
    const dicke::ExperimentConfig cfg = load(command, flags);
    const dicke::RunArtifact art = dicke::run_config(cfg);
    dicke::write_artifact(art, cfg.out_dir);
    std::cout << command << ": wrote " << cfg.out_dir << "/summary.json";
    for (const auto& [file, _] : art.files) std::cout << ", " << file;
    std::cout << '\n';
    return 0;
  } catch (const std::exception& e) {
    const int code = dicke::exit_code_for(e);
    std::cerr << "error: " << e.what();
    if (auto* f = dynamic_cast<const dicke::IntegrationFailure*>(&e)) std::cerr << " (t = " << f->time << " s)";
    if (auto* p = dynamic_cast<const dicke::ProtocolError*>(&e)) std::cerr << " (step " << p->step + 1 << ")";
    std::cerr << '\n';
    return code;
  }
}
