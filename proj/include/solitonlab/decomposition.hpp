#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "solitonlab/field.hpp"
#include "solitonlab/potential.hpp"
#include "solitonlab/profiles.hpp"

namespace solitonlab {

struct DecompositionOptions {
  int max_iterations = 50;
  /// Converged when max|G| <= tolerance_scale (1 + ||psi||^2).
  double tolerance_scale = 1e-10;
  /// Extra Newton steps taken after the tolerance is met, while the residual still drops.
  int polish_iterations = 3;
  /// Relative forward-difference step for the Jacobian.
  double fd_step = 1e-6;
  double condition_limit = 1e12;
  /// Admissible frequency interval I0.
  double mu_min = 0.5;
  double mu_max = 4.0;
};

/// psi = sum_i eta_{sigma_i} + w with w skew-orthogonal to every tangent frame.
/// Holds one soliton for single-soliton fits and two otherwise.
struct DecompositionResult {
  std::vector<SolitonParams> solitons;
  WaveField fluctuation;
  double residual_norm = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  double w_l2 = 0.0;
  double time = 0.0;

  const SolitonParams& sigma1() const { return solitons.at(0); }
  const SolitonParams& sigma2() const { return solitons.at(1); }
};

/// Stacked pairings omega(psi - sum_j eta_{sigma_j}, e_beta eta_{sigma_i}),
/// all four generators for soliton 1, then soliton 2. Throws Error(Domain)
/// when some mu lies outside I0.
Eigen::VectorXd g_residual(const WaveField& psi, const std::vector<SolitonParams>& sigmas,
                           ProfileCache& profiles, const DecompositionOptions& options = {});
Eigen::VectorXd g_residual(const WaveField& psi, const SolitonParams& sigma1,
                           const SolitonParams& sigma2, ProfileCache& profiles,
                           const DecompositionOptions& options = {});

/// Forward-difference Jacobian of g_residual in the stacked (a, v, gamma, mu) coordinates.
Eigen::MatrixXd g_jacobian(const WaveField& psi, const std::vector<SolitonParams>& sigmas,
                           ProfileCache& profiles, const DecompositionOptions& options = {});

/// Newton solve of G = 0. Throws ConvergenceError (carrying the best iterate
/// residual) after max_iterations, Error(DegenerateFrame) when the Jacobian
/// condition number exceeds condition_limit.
DecompositionResult decompose(const WaveField& psi, const std::vector<SolitonParams>& guesses,
                              ProfileCache& profiles, const DecompositionOptions& options = {});
DecompositionResult decompose(const WaveField& psi, const SolitonParams& guess1,
                              const SolitonParams& guess2, ProfileCache& profiles,
                              const DecompositionOptions& options = {});

/// Frame-by-frame continuation. Each fit is seeded by the previous one
/// advanced along the free effective flow, and gamma is kept on the branch
/// closest to the prediction.
class Tracker {
 public:
  Tracker(ProfileCache& profiles, std::vector<SolitonParams> initial,
          PotentialSpec potential = {}, DecompositionOptions options = {});

  /// Throws Error carrying the frame index on failure.
  const DecompositionResult& next(const WaveField& frame);
  const std::vector<DecompositionResult>& history() const { return history_; }

 private:
  std::vector<SolitonParams> predict(double t) const;

  ProfileCache& profiles_;
  PotentialSpec potential_;
  DecompositionOptions options_;
  std::vector<SolitonParams> last_;
  double last_time_ = 0.0;
  bool started_ = false;
  std::vector<DecompositionResult> history_;
};

std::vector<DecompositionResult> track(const std::vector<WaveField>& frames,
                                       const SolitonParams& sigma1, const SolitonParams& sigma2,
                                       ProfileCache& profiles,
                                       const DecompositionOptions& options = {});

/// Columns t,a1,v1,gamma1,mu1,a2,v2,gamma2,mu2,w_l2,residual,iterations.
void write_track_csv(std::ostream& out, const std::vector<DecompositionResult>& series);

}  // namespace solitonlab
