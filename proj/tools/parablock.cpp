#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "parablock/errors.hpp"
#include "parablock/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kConvergenceError = 4;

parablock::experiment::Truncation parse_truncation(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw parablock::ConfigError("--truncation expects n2,n3");
  try {
    std::size_t used = 0;
    const int n2 = std::stoi(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(s);
    const std::string rest = s.substr(comma + 1);
    const int n3 = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    if (n2 < 2 || n3 < 2) throw parablock::ConfigError("--truncation entries must be >= 2");
    return {n2, n3};
  } catch (const std::logic_error&) {
    throw parablock::ConfigError("--truncation expects n2,n3, got '" + s + "'");
  }
}

int exit_code(const parablock::Error& e) {
  switch (e.category()) {
    case parablock::Error::Category::Solver: return kSolverError;
    case parablock::Error::Category::Convergence: return kConvergenceError;
    case parablock::Error::Category::Config:
    case parablock::Error::Category::Invalid: return kConfigError;
  }
  return kSolverError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon blockade by stimulated parametric scattering: steady states, dynamics and g2 sweeps"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::string truncation;

  for (const char* name : {"fig2", "fig3a", "fig3b", "fig4", "steady", "trace", "validate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML experiment config")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--truncation", truncation, "highest Fock number per mode, n2,n3");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    parablock::experiment::RunOptions opt;
    opt.threads = threads;
    if (!truncation.empty()) opt.truncation = parse_truncation(truncation);
    const auto config = parablock::experiment::load_config(config_path);
    const auto result = parablock::experiment::run(experiment, config, opt);
    parablock::experiment::write_outputs(result, out_dir);
    if (result.convergence_failure) {
      std::fprintf(stderr, "parablock %s: not converged: %s\n", experiment.c_str(),
                   result.convergence_failure->c_str());
      return kConvergenceError;
    }
    return kOk;
  } catch (const parablock::Error& e) {
    std::fprintf(stderr, "parablock %s: %s\n", experiment.c_str(), e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "parablock %s: %s\n", experiment.c_str(), e.what());
    return kSolverError;
  }
}
