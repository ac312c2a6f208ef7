#include "solitonlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <fmt/format.h>

#include "solitonlab/error.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// Projection onto even functions about x = 0; x_j and x_{n-j} are mirror points.
void symmetrize(Vec& v) {
  const std::size_t n = v.size();
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double avg = 0.5 * (v[j] + v[n - j]);
    v[j] = avg;
    v[n - j] = avg;
  }
}

void validate_mu_grid(const NonlinearitySpec& spec, double mu, const Grid& grid) {
  spec.validate();
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::Domain, fmt::format("soliton frequency mu={} must be positive", mu));
  }
  if (std::exp(-std::sqrt(mu) * 0.5 * grid.length) >= 1e-12) {
    throw Error(ErrorKind::Domain,
                fmt::format("grid length {} too short for mu={} (tail would exceed 1e-12)",
                            grid.length, mu));
  }
}

/// Residual (-Delta + mu) eta - f(eta) for a real profile.
Vec residual(const NonlinearitySpec& spec, double mu, const Spectral& ops, const Vec& eta) {
  const auto lap = ops.laplacian(std::span<const double>(eta));
  std::vector<cplx> z(eta.begin(), eta.end());
  const auto m = nonlinear_potential(spec, ops.grid(), z);
  Vec r(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) r[j] = -lap[j] + mu * eta[j] - m[j] * eta[j];
  return r;
}

/// Applies (k^2 + mu)^{-1}.
Vec precondition(const Spectral& ops, double mu, const Vec& v) {
  std::vector<cplx> z(v.begin(), v.end());
  auto spec = ops.forward(z);
  const auto k = ops.wavenumbers();
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] /= k[j] * k[j] + mu;
  ops.inverse(spec, z);
  Vec out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = z[j].real();
  return out;
}

/// Restarted right-preconditioned GMRES for A x = b, A given as an operator.
Vec gmres(const std::function<Vec(const Vec&)>& apply, const Vec& b, double rel_tol, int restart,
          int max_iterations) {
  const std::size_t n = b.size();
  Vec x(n, 0.0);
  const double bnorm = norm(b);
  if (bnorm == 0.0) return x;
  int total = 0;
  while (total < max_iterations) {
    Vec r = b;
    if (total > 0) {
      const Vec ax = apply(x);
      for (std::size_t j = 0; j < n; ++j) r[j] -= ax[j];
    }
    const double beta = norm(r);
    if (beta <= rel_tol * bnorm) break;
    std::vector<Vec> basis;
    basis.reserve(restart + 1);
    for (auto& v : r) v /= beta;
    basis.push_back(std::move(r));
    std::vector<std::vector<double>> hess(restart + 1, std::vector<double>(restart, 0.0));
    std::vector<double> cs(restart), sn(restart), g(restart + 1, 0.0);
    g[0] = beta;
    int used = 0;
    for (int i = 0; i < restart && total < max_iterations; ++i, ++total) {
      Vec w = apply(basis[i]);
      for (int k = 0; k <= i; ++k) {
        hess[k][i] = dot(w, basis[k]);
        for (std::size_t j = 0; j < n; ++j) w[j] -= hess[k][i] * basis[k][j];
      }
      hess[i + 1][i] = norm(w);
      for (int k = 0; k < i; ++k) {
        const double tmp = cs[k] * hess[k][i] + sn[k] * hess[k + 1][i];
        hess[k + 1][i] = -sn[k] * hess[k][i] + cs[k] * hess[k + 1][i];
        hess[k][i] = tmp;
      }
      const double denom = std::hypot(hess[i][i], hess[i + 1][i]);
      cs[i] = hess[i][i] / denom;
      sn[i] = hess[i + 1][i] / denom;
      const double h_next = hess[i + 1][i];
      hess[i][i] = denom;
      hess[i + 1][i] = 0.0;
      g[i + 1] = -sn[i] * g[i];
      g[i] = cs[i] * g[i];
      used = i + 1;
      if (std::abs(g[i + 1]) <= rel_tol * bnorm || h_next == 0.0) {
        ++total;
        break;
      }
      for (auto& v : w) v /= h_next;
      basis.push_back(std::move(w));
    }
    std::vector<double> y(used, 0.0);
    for (int i = used - 1; i >= 0; --i) {
      double acc = g[i];
      for (int k = i + 1; k < used; ++k) acc -= hess[i][k] * y[k];
      y[i] = acc / hess[i][i];
    }
    for (int i = 0; i < used; ++i) {
      for (std::size_t j = 0; j < n; ++j) x[j] += y[i] * basis[i][j];
    }
    if (std::abs(g[used]) <= rel_tol * bnorm) break;
  }
  return x;
}

Vec initial_guess(const NonlinearitySpec& spec, double mu, const Grid& grid) {
  Vec eta(grid.points);
  const double sq = std::sqrt(mu);
  if (spec.kind == NonlinearitySpec::Kind::Power) {
    // Exact pure-power soliton; reduces to sqrt(2 mu) sech(sqrt(mu) x) for s = 2.
    const double s = spec.power.s;
    const double amp = std::pow(0.5 * (s + 2.0) * mu, 1.0 / s);
    for (std::size_t j = 0; j < grid.points; ++j) {
      eta[j] = amp * std::pow(1.0 / std::cosh(0.5 * s * sq * grid.x(j)), 2.0 / s);
    }
  } else {
    const double amp = std::sqrt(2.0 * mu);
    for (std::size_t j = 0; j < grid.points; ++j) eta[j] = amp / std::cosh(sq * grid.x(j));
  }
  return eta;
}

/// Fixed-point iteration in Fourier space with power renormalization.
Vec spectral_renormalization(const NonlinearitySpec& spec, double mu, const Spectral& ops, Vec eta,
                             int max_iterations) {
  const auto k = ops.wavenumbers();
  const std::size_t n = eta.size();
  std::vector<cplx> z(n), u_hat(n), n_hat(n);
  for (int it = 0; it < max_iterations; ++it) {
    std::copy(eta.begin(), eta.end(), z.begin());
    const auto m = nonlinear_potential(spec, ops.grid(), z);
    ops.forward(z, u_hat);
    for (std::size_t j = 0; j < n; ++j) z[j] = m[j] * eta[j];
    ops.forward(z, n_hat);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      lhs += (k[j] * k[j] + mu) * std::norm(u_hat[j]);
      rhs += (std::conj(u_hat[j]) * n_hat[j]).real();
    }
    if (!(rhs > 0.0)) break;
    const double factor = std::pow(lhs / rhs, 1.5);
    for (std::size_t j = 0; j < n; ++j) n_hat[j] *= factor / (k[j] * k[j] + mu);
    ops.inverse(n_hat, z);
    double change = 0.0, size = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      change += (z[j].real() - eta[j]) * (z[j].real() - eta[j]);
      size += eta[j] * eta[j];
      eta[j] = z[j].real();
    }
    symmetrize(eta);
    if (change <= 1e-16 * size) break;
  }
  return eta;
}

double half_l2(const Vec& eta, double dx) { return 0.5 * dot(eta, eta) * dx; }

}  // namespace

double eigen_residual(const NonlinearitySpec& spec, double mu, const Grid& grid,
                      std::span<const double> eta) {
  const auto ops = Spectral::for_grid(grid);
  Vec e(eta.begin(), eta.end());
  const auto r = residual(spec, mu, *ops, e);
  const double en = norm(e);
  return en > 0.0 ? norm(r) / en : norm(r);
}

std::vector<double> solve_ground_state(const NonlinearitySpec& spec, double mu, const Grid& grid,
                                       const ProfileOptions& options,
                                       std::span<const double> seed) {
  validate_mu_grid(spec, mu, grid);
  const auto ops = Spectral::for_grid(grid);
  Vec eta;
  if (!seed.empty()) {
    if (seed.size() != grid.points) {
      throw Error(ErrorKind::GridMismatch, "profile seed does not match the grid");
    }
    eta.assign(seed.begin(), seed.end());
  } else {
    eta = initial_guess(spec, mu, grid);
    if (spec.has_nonlocal()) {
      eta = spectral_renormalization(spec, mu, *ops, std::move(eta),
                                     options.max_renormalization_iterations);
    }
  }
  symmetrize(eta);

  // Damped Newton; the inner linear solve uses (k^2 + mu)^{-1} as a right
  // preconditioner, so the Krylov operator is I - f'(eta) (k^2 + mu)^{-1}.
  Vec r = residual(spec, mu, *ops, eta);
  double rnorm = norm(r);
  double rel = rnorm / norm(eta);
  int stalls = 0;
  int it = 0;
  for (; it < options.max_newton_iterations; ++it) {
    if (rel <= 1e-14) break;
    const double inner_tol = std::clamp(rel, 1e-13, 1e-4);
    auto apply = [&](const Vec& y) {
      Vec py = precondition(*ops, mu, y);
      const auto fp = apply_fprime(spec, grid, eta, std::vector<cplx>(py.begin(), py.end()));
      Vec out(y.size());
      for (std::size_t j = 0; j < y.size(); ++j) out[j] = y[j] - fp[j].real();
      symmetrize(out);
      return out;
    };
    Vec minus_r(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) minus_r[j] = -r[j];
    // Odd round-off in the residual lies outside the range of the even operator.
    symmetrize(minus_r);
    Vec step = precondition(*ops, mu, gmres(apply, minus_r, inner_tol, 120, 600));
    symmetrize(step);

    double lambda = 1.0;
    Vec trial(eta.size());
    Vec r_trial;
    double trial_norm = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < eta.size(); ++j) trial[j] = eta[j] + lambda * step[j];
      r_trial = residual(spec, mu, *ops, trial);
      trial_norm = norm(r_trial);
      if (trial_norm < (1.0 - 1e-4 * lambda) * rnorm || lambda < 1.0 / 64.0) break;
      lambda *= 0.5;
    }
    if (trial_norm >= rnorm) {
      // No further decrease: the residual sits at the round-off floor.
      break;
    }
    const double previous = rnorm;
    eta.swap(trial);
    r.swap(r_trial);
    rnorm = trial_norm;
    rel = rnorm / norm(eta);
    if (rnorm > 0.5 * previous && rel <= options.tolerance) {
      if (++stalls >= 2) break;
    }
  }
  if (!(rel <= options.tolerance) || !std::isfinite(rel)) {
    throw ConvergenceError(
        fmt::format("profile solve for mu={} stalled at relative residual {:.3e}", mu, rel), rel,
        it);
  }
  return eta;
}

SolitonProfile solve_profile(const NonlinearitySpec& spec, double mu, const Grid& grid,
                             const ProfileOptions& options, std::span<const double> seed) {
  validate_mu_grid(spec, mu, grid);
  const auto ops = Spectral::for_grid(grid);
  SolitonProfile p;
  p.spec = spec;
  p.grid = grid;
  p.mu = mu;
  p.samples = solve_ground_state(spec, mu, grid, options, seed);

  const double dmu = options.dmu_relative * mu;
  const Vec plus = solve_ground_state(spec, mu + dmu, grid, options, p.samples);
  const Vec minus = solve_ground_state(spec, mu - dmu, grid, options, p.samples);

  const double dx = grid.spacing();
  p.deriv_samples = ops->derivative(std::span<const double>(p.samples));
  p.dmu_samples.resize(grid.points);
  for (std::size_t j = 0; j < grid.points; ++j) {
    p.dmu_samples[j] = (plus[j] - minus[j]) / (2.0 * dmu);
  }
  p.mass = half_l2(p.samples, dx);
  p.mass_slope = (half_l2(plus, dx) - half_l2(minus, dx)) / (2.0 * dmu);
  p.residual = eigen_residual(spec, mu, grid, p.samples);
  if (!(p.mass_slope > 0.0)) {
    throw Error(ErrorKind::OrbitalStability,
                fmt::format("m'(mu) = {} <= 0 at mu = {}: orbital stability condition violated",
                            p.mass_slope, mu));
  }
  return p;
}

double soliton_mass(const SolitonProfile& profile) {
  return half_l2(profile.samples, profile.grid.spacing());
}

double mass_slope(const NonlinearitySpec& spec, double mu, const Grid& grid,
                  const ProfileOptions& options) {
  return solve_profile(spec, mu, grid, options).mass_slope;
}

std::vector<double> dmu_profile(const NonlinearitySpec& spec, double mu, const Grid& grid,
                                const ProfileOptions& options) {
  return solve_profile(spec, mu, grid, options).dmu_samples;
}

double fitted_tail_rate(const SolitonProfile& profile, double lo, double hi) {
  const double peak = *std::max_element(profile.samples.begin(), profile.samples.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t j = 0; j < profile.samples.size(); ++j) {
    const double x = profile.grid.x(j);
    const double rel = profile.samples[j] / peak;
    if (x <= 0.0 || rel < lo || rel > hi) continue;
    const double y = std::log(profile.samples[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) throw Error(ErrorKind::Domain, "too few tail samples for a decay fit");
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return -slope;
}

std::shared_ptr<const PreparedProfile> PreparedProfile::prepare(
    std::shared_ptr<const SolitonProfile> p) {
  auto out = std::make_shared<PreparedProfile>();
  const auto ops = Spectral::for_grid(p->grid);
  const std::size_t n = p->grid.points;
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = {p->samples[j], p->deriv_samples[j]};
  out->value_spectrum = ops->forward(z);
  for (std::size_t j = 0; j < n; ++j) z[j] = {p->dmu_samples[j], 0.0};
  out->dmu_spectrum = ops->forward(z);
  out->profile = std::move(p);
  return out;
}

ProfileCache::ProfileCache(NonlinearitySpec spec, Grid grid, ProfileOptions options,
                           std::size_t capacity)
    : spec_(spec), grid_(grid), options_(options), capacity_(std::max<std::size_t>(capacity, 4)) {
  spec_.validate();
}

std::size_t ProfileCache::solves() const {
  std::lock_guard lock(mutex_);
  return solves_;
}

std::shared_ptr<const PreparedProfile> ProfileCache::get(double mu) {
  std::shared_ptr<const SolitonProfile> seed;
  {
    std::lock_guard lock(mutex_);
    double best = 0.05;
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      const double m = (*it)->profile->mu;
      if (m == mu) {
        auto hit = *it;
        entries_.splice(entries_.begin(), entries_, it);
        return hit;
      }
      const double gap = std::abs(m - mu) / mu;
      if (gap < best) {
        best = gap;
        seed = (*it)->profile;
      }
    }
  }
  // Solve on the shortest sub-grid with the same spacing whose edge sees a
  // negligible tail, then embed by zero padding.
  Grid compact = grid_;
  auto negligible = [&](double half) {
    const double rate = spec_.has_nonlocal() ? std::min(std::sqrt(mu), spec_.hartree.lambda)
                                             : std::sqrt(mu);
    return std::exp(-rate * half) < 1e-17;
  };
  while (compact.points > 64 && negligible(0.25 * compact.length)) {
    compact = Grid(0.5 * compact.length, compact.points / 2);
  }
  const std::size_t offset = (grid_.points - compact.points) / 2;
  Vec seed_samples;
  if (seed) {
    seed_samples.assign(seed->samples.begin() + static_cast<std::ptrdiff_t>(offset),
                        seed->samples.begin() + static_cast<std::ptrdiff_t>(offset + compact.points));
  }
  SolitonProfile small = solve_profile(spec_, mu, compact, options_, seed_samples);
  auto profile = std::make_shared<SolitonProfile>(small);
  if (!(compact == grid_)) {
    auto embed = [&](const Vec& v) {
      Vec out(grid_.points, 0.0);
      std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
      return out;
    };
    profile->grid = grid_;
    profile->samples = embed(small.samples);
    profile->deriv_samples = embed(small.deriv_samples);
    profile->dmu_samples = embed(small.dmu_samples);
    profile->residual = eigen_residual(spec_, mu, grid_, profile->samples);
  }
  auto prepared = PreparedProfile::prepare(std::move(profile));
  std::lock_guard lock(mutex_);
  ++solves_;
  entries_.push_front(prepared);
  while (entries_.size() > capacity_) entries_.pop_back();
  return prepared;
}

}  // namespace solitonlab
