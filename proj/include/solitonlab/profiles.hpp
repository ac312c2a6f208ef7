#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "solitonlab/grid.hpp"
#include "solitonlab/nonlinearity.hpp"

namespace solitonlab {

/// Ground state eta_mu of (-Delta + mu) eta = f(eta) together with its
/// x- and mu-derivatives, mass m(mu) = 1/2 int eta^2 and slope m'(mu).
struct SolitonProfile {
  NonlinearitySpec spec;
  Grid grid;
  double mu = 0.0;
  std::vector<double> samples;
  std::vector<double> deriv_samples;
  std::vector<double> dmu_samples;
  double mass = 0.0;
  double mass_slope = 0.0;
  /// Relative eigenvalue residual of samples.
  double residual = 0.0;
};

struct ProfileOptions {
  /// Required relative residual ||(-Delta + mu) eta - f(eta)|| / ||eta||.
  double tolerance = 1e-10;
  int max_newton_iterations = 60;
  int max_renormalization_iterations = 4000;
  /// Relative step for mu-derivatives.
  double dmu_relative = 1e-4;
};

/// Solves the eigenvalue problem only. A non-empty seed replaces the
/// built-in sech-type initial guess.
std::vector<double> solve_ground_state(const NonlinearitySpec& spec, double mu, const Grid& grid,
                                       const ProfileOptions& options = {},
                                       std::span<const double> seed = {});

double eigen_residual(const NonlinearitySpec& spec, double mu, const Grid& grid,
                      std::span<const double> eta);

/// Full profile: three ground-state solves (mu, mu +- dmu). Throws
/// Error(Domain) for mu <= 0 or a grid too short for the tail, Error(OrbitalStability)
/// if m'(mu) <= 0, ConvergenceError if Newton stalls above tolerance.
SolitonProfile solve_profile(const NonlinearitySpec& spec, double mu, const Grid& grid,
                             const ProfileOptions& options = {},
                             std::span<const double> seed = {});

double soliton_mass(const SolitonProfile& profile);
double mass_slope(const NonlinearitySpec& spec, double mu, const Grid& grid,
                  const ProfileOptions& options = {});
std::vector<double> dmu_profile(const NonlinearitySpec& spec, double mu, const Grid& grid,
                                const ProfileOptions& options = {});

/// Least-squares exponential decay rate of the profile tail, fitted where
/// eta / max(eta) lies in [lo, hi].
double fitted_tail_rate(const SolitonProfile& profile, double lo = 1e-10, double hi = 1e-4);

/// Profile plus the spectra used for fast band-limited placement.
struct PreparedProfile {
  std::shared_ptr<const SolitonProfile> profile;
  /// FFT of eta + i eta'; both are real so one inverse transform yields both.
  std::vector<cplx> value_spectrum;
  /// FFT of d eta / d mu.
  std::vector<cplx> dmu_spectrum;

  static std::shared_ptr<const PreparedProfile> prepare(std::shared_ptr<const SolitonProfile> p);
};

/// Thread-safe LRU cache of prepared profiles for one (spec, grid) pair.
/// New solves are seeded from the nearest cached mu.
class ProfileCache {
 public:
  ProfileCache(NonlinearitySpec spec, Grid grid, ProfileOptions options = {},
               std::size_t capacity = 48);

  std::shared_ptr<const PreparedProfile> get(double mu);

  const NonlinearitySpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }
  const ProfileOptions& options() const { return options_; }
  std::size_t solves() const;

 private:
  NonlinearitySpec spec_;
  Grid grid_;
  ProfileOptions options_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::shared_ptr<const PreparedProfile>> entries_;  // most recent first
  std::size_t solves_ = 0;
};

}  // namespace solitonlab
