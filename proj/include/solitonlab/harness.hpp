#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "solitonlab/config.hpp"
#include "solitonlab/decomposition.hpp"
#include "solitonlab/field.hpp"
#include "solitonlab/manifold.hpp"
#include "solitonlab/profiles.hpp"

namespace solitonlab {

/// tau = C_tau alpha min(log ||v0||, 2 |log h|); h = 0 drops the h branch.
/// Throws Error(Domain) for ||v0|| <= 1.
double compute_tau_alpha(double tau_constant, double alpha, double v0_norm, double h);
double compute_tau_alpha(const ExperimentConfig& config, double v0_norm);

/// Band-limited noise (|k index| <= n/8) from the seed, projected
/// skew-orthogonal to every frame and scaled to the requested L2 norm.
WaveField seeded_fluctuation(const Grid& grid, const std::vector<TangentFrame>& frames,
                             double norm, std::uint64_t seed);

/// Removes the components of w along i X for every frame vector X, so that
/// omega(w, X) = 0 afterwards.
WaveField project_skew_orthogonal(const WaveField& w, const std::vector<TangentFrame>& frames);

/// Sum of the configured solitons plus the seeded fluctuation.
WaveField build_initial(const ExperimentConfig& config, ProfileCache& profiles);

struct FrameRecord {
  double t = 0.0;
  std::vector<SolitonParams> tracked;
  std::vector<SolitonParams> effective;
  double w_l2 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double charge = 0.0;
  double energy = 0.0;
  /// (||psi||^2 - ||w||^2 - sum 2 m(mu_i) - 2 Re<eta_1, eta_2>) / ||psi||^2.
  double charge_identity = 0.0;
};

struct RunRecord {
  std::string config_hash;
  Scenario scenario = Scenario::Collision;
  double v0_norm = 0.0;
  double separation = 0.0;
  /// NaN when the scenario has no theorem window.
  double tau_alpha = 0.0;
  /// End of the observation window [0, window_end].
  double window_end = 0.0;
  double end_time = 0.0;
  std::vector<FrameRecord> frames;
  double sup_w = 0.0;
  double w_at_window_end = 0.0;
  /// Max |tracked - effective| over the window, per coordinate (a, v, gamma, mu).
  std::array<double, 4> max_deviation{};
  double max_charge_drift = 0.0;
  double max_charge_identity = 0.0;
  std::string status = "ok";
  std::string error;

  bool ok() const { return status == "ok"; }
};

/// Evolves, tracks every frame and compares with the effective flow. Errors
/// during the run produce a failed record with the partial series kept.
RunRecord run_experiment(const ExperimentConfig& config);

enum class SweepAxis { V0, H, D };
std::string axis_name(SweepAxis a);
SweepAxis parse_axis(const std::string& name);

struct SweepSample {
  double value = 0.0;
  double metric = 0.0;
  RunRecord record;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Least squares of log y against log x over positive finite pairs.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  SweepAxis axis = SweepAxis::V0;
  /// "sup_w", "w_at_window_end" or "max_dev_a".
  std::string metric;
  std::vector<SweepSample> samples;
  LinearFit fit;
  bool partial = false;
};

/// Config for one sweep point. V0 sets v1 = s v / 2, v2 = -s v / 2 keeping the
/// sign s of v1 - v2 and rescales a seeded collision fluctuation to the same
/// fraction of its smallness budget. H sets h and moves the solitons so that
/// h a stays fixed. D places the solitons at their midpoint -+ d / 2.
ExperimentConfig sweep_point(const ExperimentConfig& base, SweepAxis axis, double value);

/// Runs every point on a pool of `jobs` workers; each worker owns its run.
SweepResult run_scaling_sweep(const ExperimentConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int jobs = 1);

std::string run_summary(const RunRecord& record, const ExperimentConfig& config);
std::string sweep_summary(const SweepResult& sweep, const ExperimentConfig& base);

/// series.csv, effective.csv, diagnostics.csv, summary.json and config.ini.
void emit_run(const RunRecord& record, const ExperimentConfig& config,
              const std::filesystem::path& dir);
/// sweep.csv, summary.json and one emit_run directory per point.
void emit_sweep(const SweepResult& sweep, const ExperimentConfig& base,
                const std::filesystem::path& dir);

}  // namespace solitonlab
