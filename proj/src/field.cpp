#include "solitonlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "solitonlab/error.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

double SolitonParams::canonical_gamma() const {
  const double two_pi = 2.0 * std::numbers::pi;
  double g = std::fmod(gamma, two_pi);
  if (g < 0.0) g += two_pi;
  return g;
}

bool SolitonParams::all_finite() const {
  return std::isfinite(a) && std::isfinite(v) && std::isfinite(gamma) && std::isfinite(mu);
}

GroupElement compose_group(const GroupElement& g1, const GroupElement& g2) {
  return {g1.a + g2.a, g1.v + g2.v, g1.gamma + g2.gamma + 0.5 * g1.v * g2.a};
}

GroupElement inverse(const GroupElement& g) { return {-g.a, -g.v, -g.gamma + 0.5 * g.v * g.a}; }

WaveField apply_transform(double a, double v, double gamma, const WaveField& psi) {
  const auto ops = Spectral::for_grid(psi.grid);
  auto shifted = a == 0.0 ? psi.samples : ops->translate(psi.samples, a);
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    shifted[j] *= std::polar(1.0, 0.5 * v * (psi.grid.x(j) - a) + gamma);
  }
  return WaveField(psi.grid, std::move(shifted), psi.time);
}

PlacedSoliton place(const PreparedProfile& prepared, const SolitonParams& sigma) {
  const SolitonProfile& prof = *prepared.profile;
  const Grid& grid = prof.grid;
  if (!sigma.all_finite()) throw Error(ErrorKind::NonFinite, "soliton parameters are not finite");
  const double half = 0.5 * grid.length;
  if (!(std::abs(sigma.a) < half)) {
    throw Error(ErrorKind::Placement,
                fmt::format("soliton center a={} outside the domain [-{}, {})", sigma.a, half, half));
  }
  // The profile value at the distance from the center to the boundary must be negligible.
  const double reach = half - std::abs(sigma.a);
  const double peak = *std::max_element(prof.samples.begin(), prof.samples.end());
  double tail = 0.0;
  for (std::size_t j = 0; j < grid.points; ++j) {
    if (std::abs(grid.x(j)) >= reach) tail = std::max(tail, std::abs(prof.samples[j]));
  }
  if (tail > 1e-12 * peak) {
    throw Error(ErrorKind::Placement,
                fmt::format("soliton at a={} (mu={}) reaches the periodic boundary (tail {:.2e})",
                            sigma.a, sigma.mu, tail / peak));
  }

  const auto ops = Spectral::for_grid(grid);
  const std::size_t n = grid.points;
  PlacedSoliton out;
  out.phase.resize(n);
  out.value.resize(n);
  out.deriv.resize(n);
  out.dmu.resize(n);
  const auto both = ops->translate_spectrum(prepared.value_spectrum, sigma.a);
  const auto dmu = ops->translate_spectrum(prepared.dmu_spectrum, sigma.a);
  for (std::size_t j = 0; j < n; ++j) {
    out.value[j] = both[j].real();
    out.deriv[j] = both[j].imag();
    out.dmu[j] = dmu[j].real();
    out.phase[j] = std::polar(1.0, 0.5 * sigma.v * (grid.x(j) - sigma.a) + sigma.gamma);
  }
  return out;
}

WaveField synthesize(const PreparedProfile& prepared, const SolitonParams& sigma) {
  const auto placed = place(prepared, sigma);
  std::vector<cplx> s(placed.value.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = placed.phase[j] * placed.value[j];
  return WaveField(prepared.profile->grid, std::move(s));
}

namespace {

/// Band-limited interpolant of a periodic real signal evaluated at arbitrary points.
std::vector<double> resample(const SolitonProfile& profile, const Grid& target) {
  const Grid& src = profile.grid;
  if (src.length == target.length) {
    // Zero-pad or truncate the spectrum.
    const auto ops = Spectral::for_grid(src);
    std::vector<cplx> z(profile.samples.begin(), profile.samples.end());
    const auto spec = ops->forward(z);
    const std::size_t n = src.points, m = target.points;
    std::vector<cplx> out(m, cplx{0.0, 0.0});
    const std::size_t keep = std::min(n, m) / 2;
    for (std::size_t j = 0; j < keep; ++j) {
      out[j] = spec[j];
      if (j > 0) out[m - j] = spec[n - j];
    }
    // Grid origin is at -L/2, so the Fourier phases agree for both grids.
    const auto back = Spectral::for_grid(target)->inverse(out);
    std::vector<double> r(m);
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    for (std::size_t j = 0; j < m; ++j) r[j] = back[j].real() * scale;
    return r;
  }
  const auto ops = Spectral::for_grid(src);
  std::vector<cplx> z(profile.samples.begin(), profile.samples.end());
  const auto spec = ops->forward(z);
  const auto k = ops->wavenumbers();
  const std::size_t n = src.points;
  std::vector<double> r(target.points, 0.0);
  for (std::size_t j = 0; j < target.points; ++j) {
    const double x = target.x(j);
    if (x < -0.5 * src.length || x >= 0.5 * src.length) continue;
    cplx acc{0.0, 0.0};
    for (std::size_t q = 0; q < n; ++q) {
      if (q == n / 2) continue;
      acc += spec[q] * std::polar(1.0, k[q] * (x + 0.5 * src.length));
    }
    r[j] = acc.real() / static_cast<double>(n);
  }
  return r;
}

}  // namespace

WaveField synthesize(const SolitonProfile& profile, const SolitonParams& sigma, const Grid& grid) {
  auto base = std::make_shared<SolitonProfile>(profile);
  if (!(grid == profile.grid)) {
    base->samples = resample(profile, grid);
    base->grid = grid;
    const auto ops = Spectral::for_grid(grid);
    base->deriv_samples = ops->derivative(std::span<const double>(base->samples));
    base->dmu_samples = std::vector<double>(grid.points, 0.0);
  }
  const auto prepared = PreparedProfile::prepare(std::move(base));
  return synthesize(*prepared, sigma);
}

double inner(const WaveField& u, const WaveField& v) {
  require_same_grid(u.grid, v.grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    acc += u.samples[j].real() * v.samples[j].real() + u.samples[j].imag() * v.samples[j].imag();
  }
  return acc * u.grid.spacing();
}

double symplectic(const WaveField& u, const WaveField& v) {
  require_same_grid(u.grid, v.grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    acc += u.samples[j].imag() * v.samples[j].real() - u.samples[j].real() * v.samples[j].imag();
  }
  return acc * u.grid.spacing();
}

double charge(const WaveField& psi) {
  double acc = 0.0;
  for (const auto& z : psi.samples) acc += std::norm(z);
  return 0.5 * acc * psi.grid.spacing();
}

double l2_norm(const WaveField& psi) { return std::sqrt(2.0 * charge(psi)); }

double energy(const WaveField& psi, const PotentialSpec& potential, const NonlinearitySpec& nl,
              double t) {
  const auto ops = Spectral::for_grid(psi.grid);
  const auto spec = ops->forward(psi.samples);
  const auto k = ops->wavenumbers();
  double kinetic = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) kinetic += k[j] * k[j] * std::norm(spec[j]);
  const double dx = psi.grid.spacing();
  kinetic *= 0.5 * dx / static_cast<double>(psi.size());
  double external = 0.0;
  if (!potential.is_zero()) {
    for (std::size_t j = 0; j < psi.size(); ++j) {
      external += eval_potential(potential, psi.grid.x(j), t).value * std::norm(psi.samples[j]);
    }
    external *= 0.5 * dx;
  }
  return kinetic + external - potential_F(nl, psi);
}

double energy_rate(const WaveField& psi, const PotentialSpec& potential, double t) {
  if (!potential.time_dependent()) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    acc += potential_time_derivative(potential, psi.grid.x(j), t) * std::norm(psi.samples[j]);
  }
  return 0.5 * acc * psi.grid.spacing();
}

}  // namespace solitonlab
