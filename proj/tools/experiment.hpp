#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "feec/mesh.hpp"

namespace feec::cli {

/// Malformed or inconsistent input; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshSpec {
  std::string file;  // empty: generated box
  int dim = 2;
  int divisions = 8;
  double grading = 0.0;
};

/// Everything that determines the outcome of a run. Output paths are not
/// part of it.
struct ExperimentConfig {
  MeshSpec mesh;
  /// Patch grammar of PatchSpec; unset for mesh files, whose gamma_T is read
  /// from the file.
  std::optional<std::string> patch = std::string("left");
  int k = 0;
  double epsilon = 0.3;
  double delta = 0.1;
  int max_halvings = 8;
  int levels = 4;
  std::string rhs = "sine";
  int quadrature_degree = 6;
  int ball_radial = 16;
  int ball_angular = 16;
  double tolerance = 1e-8;
  std::uint64_t seed = 7;
  std::vector<std::string> checks{"distortion", "mollify", "extension", "projection", "density"};
  std::vector<double> density_epsilons{0.2, 0.1, 0.05, 0.025};

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

MeshedDomain build_domain(const ExperimentConfig& config);

struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;
  std::string csv;
};

CommandResult cmd_betti(const ExperimentConfig& config);
CommandResult cmd_harmonic(const ExperimentConfig& config);
CommandResult cmd_solve(const ExperimentConfig& config);
CommandResult cmd_converge(const ExperimentConfig& config);
CommandResult cmd_project_verify(const ExperimentConfig& config);
/// Writes the mesh document to `mesh_output` when it is not empty.
CommandResult cmd_mesh_generate(const ExperimentConfig& config, const std::string& mesh_output);
CommandResult cmd_mesh_inspect(const ExperimentConfig& config);

/// Runs `f`, mapping ConfigError and input errors (MeshError, parse errors)
/// to exit status 2 with an error report.
CommandResult run_guarded(const std::string& command, const ExperimentConfig& config,
                          const std::function<CommandResult(const ExperimentConfig&)>& f);

}  // namespace feec::cli
