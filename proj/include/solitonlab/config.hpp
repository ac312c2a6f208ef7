#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "solitonlab/field.hpp"
#include "solitonlab/grid.hpp"
#include "solitonlab/nonlinearity.hpp"
#include "solitonlab/potential.hpp"
#include "solitonlab/solver.hpp"

namespace solitonlab {

enum class Scenario { Collision, Escape, Separated, Single };

std::string scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

struct ExperimentConfig {
  NonlinearitySpec nonlinearity = NonlinearitySpec::cubic();
  PotentialSpec potential;
  Grid grid{256.0, 8192};
  SolverConfig solver;
  SolitonParams soliton1{-12.0, 8.0, 0.0, 1.0};
  /// Ignored by the Single scenario.
  SolitonParams soliton2{12.0, -8.0, 0.0, 1.0};
  /// L2 norm of the seeded fluctuation; 0 disables it.
  double fluctuation_norm = 0.0;
  /// chi in ||w|| = norm * exp(-chi s), with s = d for separated runs and
  /// s = ||v0|| for escape runs.
  double fluctuation_decay = 0.0;
  /// C in the smallness requirement ||w||^2 < C / ||v1 - v2|| for collisions.
  double fluctuation_constant = 1.0;
  double alpha = 0.5;
  double tau_constant = 1.0;
  /// Runs continue to max(window end, horizon).
  double horizon = 0.0;
  /// Exponent of the observation window for escape (||v0||^eps) and separated (d^eps) runs.
  double epsilon = 0.5;
  Scenario scenario = Scenario::Collision;
  std::string output_dir;
  std::uint64_t seed = 0;
  double mu_min = 0.5;
  double mu_max = 4.0;
  /// Tracked frames between full-field checkpoints; 0 disables them.
  std::size_t field_checkpoint_stride = 0;
  /// RK4 substeps per tracked frame for the effective flow.
  int effective_substeps = 8;

  /// Throws Error(Config) or Error(Domain) with the offending key.
  void validate() const;
  /// soliton1 alone for Single, both otherwise.
  std::vector<SolitonParams> initial_solitons() const;
  /// Relative speed ||v1 - v2||, or |v1| for a single soliton.
  double v0_norm() const;
  /// Initial separation |a1 - a2|.
  double separation() const;
  /// Seeded fluctuation norm after the scenario's decay factor.
  double effective_fluctuation_norm() const;
};

/// Applies "section.key=value" overrides; unknown keys are a config error.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
void apply_settings(ExperimentConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& settings);

/// INI-style text with the sections [nonlinearity], [potential], [grid],
/// [solver], [soliton1], [soliton2], [fluctuation], [experiment].
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);
std::string format_config(const ExperimentConfig& config);

/// Canonical JSON of every field that affects results.
std::string canonical_json(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a over canonical_json.
std::string config_hash(const ExperimentConfig& config);
/// Hash of the nonlinearity and grid only.
std::string spec_hash(const NonlinearitySpec& spec, const Grid& grid);

}  // namespace solitonlab
