#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parablock/dipolariton.hpp"

namespace parablock::experiment {

enum class ModelKind { Generic, Dipolariton, SingleModeBaseline };
enum class AxisScale { Linear, Log };
enum class DriveKind { CW, Pulsed };
enum class PulseShape { Gaussian, Square };
enum class ConstantsSource { Derived, Published };

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  AxisScale scale = AxisScale::Linear;

  std::vector<double> values() const;
};

/// Highest Fock number kept per mode; mode dimension is n + 1.
struct Truncation {
  int n2 = 6;
  int n3 = 6;

  int dim2() const { return n2 + 1; }
  int dim3() const { return n3 + 1; }
  Truncation raised(int k) const { return {n2 + k, n3 + k}; }
};

/// Times are in ps for the dipolariton model and 1/kappa for the generic one.
struct Drive {
  DriveKind kind = DriveKind::CW;
  PulseShape shape = PulseShape::Gaussian;
  double fwhm_ps = 50.0;
  double center_ps = 250.0;
  std::optional<double> peak;  ///< pulse amplitude; calibrated to target_N2 when absent
  double target_N2 = 0.33;
  double window_ps = 2000.0;
  double dt_ps = 1.0;
  double repetition_ps = 1.0e6;  ///< metadata only
};

struct MeanField {
  double alpha0 = 0.0;
  double P1 = 0.0;
  double Delta1 = 0.0;
  double kappa1 = 1.0;
};

struct GenericConfig {
  double alpha = 1.0;
  std::optional<double> F2;
  double Delta2 = 0.0;
  double Delta3 = 0.0;
  double kappa2 = 1.0;
  double kappa3 = 1.0;
  std::optional<MeanField> mean_field;  ///< overrides alpha with alpha0 sqrt(n1)
};

struct DipolaritonConfig {
  dipolariton::Params params;
  ConstantsSource constants = ConstantsSource::Derived;
  std::optional<double> Delta1;  ///< meV; default puts both condition lines at zero
  std::optional<double> Delta2;
  std::optional<double> F2;
};

struct CorrelationConfig {
  double tau_stop_ps = 2000.0;
  int tau_count = 1001;
};

struct ExperimentConfig {
  std::optional<ModelKind> model;
  std::optional<Truncation> truncation;
  GenericConfig generic;
  DipolaritonConfig dipolariton;
  std::vector<Axis> sweep;
  Drive drive;
  CorrelationConfig correlation;
  std::vector<std::string> outputs{"N2", "N3", "g2"};

  /// Throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical YAML of every field, for CSV provenance headers.
std::string echo(const ExperimentConfig& config);

const char* to_string(ModelKind m);

}  // namespace parablock::experiment
