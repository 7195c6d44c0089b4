#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parablock/config.hpp"
#include "parablock/dipolariton.hpp"
#include "parablock/table.hpp"

namespace parablock::experiment {

struct RunOptions {
  int threads = 1;
  std::optional<Truncation> truncation;  ///< overrides the config
};

struct OutputFile {
  std::string name;
  Table table;
};

struct RunResult {
  std::string experiment;
  ExperimentConfig config;  ///< with every default filled in
  std::vector<OutputFile> files;
  std::optional<std::string> convergence_failure;
};

/// Dipolariton constants at the configured (or optimal) detunings.
struct OperatingPoint {
  dipolariton::EffectiveConstants ec;
  Complex psi1;
  double offset = 0.0;  ///< E3 + E1 - 2 E2
  double intersection_Delta1 = 0.0;
  double intersection_Delta2 = 0.0;
};

OperatingPoint operating_point(const DipolaritonConfig& d);

/// Model reduced to generator form: H(F2) = h0 + F2 * drive, in 1/ps for the
/// dipolariton models and kappa units for the generic one.
struct ModelSystem {
  FockSpace space;
  Operator h0;
  Operator drive;
  std::vector<DecayChannel> channels;
  Operator a2;
  std::optional<Operator> a3;
  double F2 = 0.0;
};

ModelSystem build_system(const ExperimentConfig& c, Truncation t);

struct PointResult {
  double N2 = 0.0;
  double N3 = 0.0;
  std::optional<double> g2;
  double residual = 0.0;
  bool converged = false;
  double tail = 0.0;  ///< largest population in a top Fock level
};

PointResult solve_point(const ExperimentConfig& c, Truncation t);

/// Returns a copy with one named parameter changed (sweep axes use this).
ExperimentConfig with_parameter(ExperimentConfig c, const std::string& name, double value);

/// Drive amplitude whose steady-state N2 equals target.
double calibrate_cw_drive(const ExperimentConfig& c, Truncation t, double target);

RunResult run_fig2(const ExperimentConfig& c, const RunOptions& opt = {});
RunResult run_fig3a(const ExperimentConfig& c, const RunOptions& opt = {});
RunResult run_fig3b(const ExperimentConfig& c, const RunOptions& opt = {});
RunResult run_fig4(const ExperimentConfig& c, const RunOptions& opt = {});
RunResult run_steady(const ExperimentConfig& c, const RunOptions& opt = {});
RunResult run_trace(const ExperimentConfig& c, const RunOptions& opt = {});
RunResult validate_convergence(const ExperimentConfig& c, const RunOptions& opt = {});

/// Dispatches on fig2 | fig3a | fig3b | fig4 | steady | trace | validate.
RunResult run(const std::string& experiment, const ExperimentConfig& c, const RunOptions& opt = {});

void write_outputs(const RunResult& r, const std::filesystem::path& dir);

}  // namespace parablock::experiment
