#include "solitonlab/nonlinearity.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

#include "solitonlab/error.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

namespace {

// Quintic smoothstep: C2, monotone on [0, 1].
double blend(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double blend_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Transition variable |y|^{sgn(s-1)}; the band is [theta/2, theta].
int cutoff_sign(const PowerLaw& p) { return p.s > 1.0 ? 1 : (p.s < 1.0 ? -1 : 0); }

struct GaussLegendre {
  static constexpr int order = 20;
  std::array<double, order> nodes{};
  std::array<double, order> weights{};

  GaussLegendre() {
    for (int i = 0; i < order; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <class F>
  double integrate(F&& f, double lo, double hi) const {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < order; ++i) acc += weights[i] * f(mid + half * nodes[i]);
    return acc * half;
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

}  // namespace

NonlinearitySpec NonlinearitySpec::power_law(double s, double theta) {
  NonlinearitySpec spec;
  spec.kind = Kind::Power;
  spec.power = {s, theta};
  return spec;
}

NonlinearitySpec NonlinearitySpec::hartree_kernel(double lambda, double g0) {
  NonlinearitySpec spec;
  spec.kind = Kind::Hartree;
  spec.hartree = {lambda, g0};
  return spec;
}

NonlinearitySpec NonlinearitySpec::sum(PowerLaw p, Hartree h) {
  NonlinearitySpec spec;
  spec.kind = Kind::Sum;
  spec.power = p;
  spec.hartree = h;
  return spec;
}

void NonlinearitySpec::validate() const {
  if (has_local()) {
    if (!(power.s > 0.0 && power.s < 4.0)) {
      throw Error(ErrorKind::Domain,
                  fmt::format("power-law exponent s={} outside the subcritical range (0, 4)",
                              power.s));
    }
    if (!(power.theta > 0.0)) {
      throw Error(ErrorKind::Domain, fmt::format("cutoff theta={} must be positive", power.theta));
    }
  }
  if (has_nonlocal()) {
    if (!(hartree.lambda > 0.0)) {
      throw Error(ErrorKind::Domain,
                  fmt::format("Hartree decay rate lambda={} must be positive", hartree.lambda));
    }
    if (!(hartree.g0 > 0.0)) {
      throw Error(ErrorKind::Domain,
                  fmt::format("Hartree coupling g0={} must be positive", hartree.g0));
    }
  }
}

std::string NonlinearitySpec::kind_name() const {
  switch (kind) {
    case Kind::Power: return "power";
    case Kind::Hartree: return "hartree";
    case Kind::Sum: return "sum";
  }
  return "power";
}

NonlinearitySpec::Kind NonlinearitySpec::parse_kind(const std::string& name) {
  if (name == "power") return Kind::Power;
  if (name == "hartree") return Kind::Hartree;
  if (name == "sum") return Kind::Sum;
  throw Error(ErrorKind::Config, fmt::format("unknown nonlinearity kind '{}'", name));
}

double cutoff(const PowerLaw& p, double y) {
  y = std::abs(y);
  const int sgn = cutoff_sign(p);
  if (sgn == 0) return 1.0;
  if (sgn < 0 && y == 0.0) return 0.0;  // chi = y^{1-s} -> 0 for s < 1
  const double z = sgn > 0 ? y : 1.0 / y;
  const double t = (z - 0.5 * p.theta) / (0.5 * p.theta);
  if (t <= 0.0) return 1.0;
  const double tail = std::pow(y, 1.0 - p.s);
  if (t >= 1.0) return tail;
  return 1.0 + blend(t) * (tail - 1.0);
}

double cutoff_derivative(const PowerLaw& p, double y) {
  y = std::abs(y);
  const int sgn = cutoff_sign(p);
  if (sgn == 0 || y == 0.0) return 0.0;
  const double z = sgn > 0 ? y : 1.0 / y;
  const double t = (z - 0.5 * p.theta) / (0.5 * p.theta);
  if (t <= 0.0) return 0.0;
  const double tail_d = (1.0 - p.s) * std::pow(y, -p.s);
  if (t >= 1.0) return tail_d;
  const double dz_dy = sgn > 0 ? 1.0 : -1.0 / (y * y);
  const double dt_dy = dz_dy / (0.5 * p.theta);
  const double tail = std::pow(y, 1.0 - p.s);
  return blend_derivative(t) * dt_dy * (tail - 1.0) + blend(t) * tail_d;
}

double local_gain(const PowerLaw& p, double y) {
  y = std::abs(y);
  if (y == 0.0) return 0.0;
  return std::pow(y, p.s) * cutoff(p, y);
}

double local_gain_derivative(const PowerLaw& p, double y) {
  y = std::abs(y);
  if (y == 0.0) return 0.0;
  return p.s * std::pow(y, p.s - 1.0) * cutoff(p, y) + std::pow(y, p.s) * cutoff_derivative(p, y);
}

double local_potential_density(const PowerLaw& p, double y) {
  y = std::abs(y);
  const auto& gl = gauss_legendre();
  auto integrand = [&p](double t) { return local_gain(p, t) * t; };
  const double pure = 1.0 / (p.s + 2.0);
  const int sgn = cutoff_sign(p);
  if (sgn == 0) return pure * std::pow(y, p.s + 2.0);
  if (sgn > 0) {
    const double lo = 0.5 * p.theta, hi = p.theta;
    if (y <= lo) return pure * std::pow(y, p.s + 2.0);
    const double base = pure * std::pow(lo, p.s + 2.0);
    if (y <= hi) return base + gl.integrate(integrand, lo, y);
    // chi = y^{1-s} above the band, so g(t) t = t^2.
    return base + gl.integrate(integrand, lo, hi) + (y * y * y - hi * hi * hi) / 3.0;
  }
  // s < 1: the regularized branch sits at small amplitude, y < 1/theta.
  const double lo = 1.0 / p.theta, hi = 2.0 / p.theta;
  if (y <= lo) return y * y * y / 3.0;
  const double base = lo * lo * lo / 3.0;
  if (y <= hi) return base + gl.integrate(integrand, lo, y);
  return base + gl.integrate(integrand, lo, hi) +
         pure * (std::pow(y, p.s + 2.0) - std::pow(hi, p.s + 2.0));
}

double periodized_hartree_kernel(const Hartree& h, double length, double x) {
  const double ax = std::abs(x);
  return h.g0 * (std::exp(-h.lambda * ax) + std::exp(-h.lambda * (length - ax))) /
         (1.0 - std::exp(-h.lambda * length));
}

std::span<const cplx> hartree_kernel_dft(const Hartree& h, const Grid& grid) {
  using Key = std::tuple<double, double, double, std::size_t>;
  static std::mutex m;
  static std::map<Key, std::shared_ptr<const std::vector<cplx>>> cache;
  const Key key{h.lambda, h.g0, grid.length, grid.points};
  {
    std::lock_guard lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  const std::size_t n = grid.points;
  const double dx = grid.spacing();
  std::vector<cplx> samples(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Displacement x_j - x_0 folded onto [-L/2, L/2].
    const double d = j <= n / 2 ? static_cast<double>(j) * dx
                                : (static_cast<double>(j) - static_cast<double>(n)) * dx;
    samples[j] = periodized_hartree_kernel(h, grid.length, d) * dx;
  }
  auto dft = std::make_shared<const std::vector<cplx>>(Spectral::for_grid(grid)->forward(samples));
  std::lock_guard lock(m);
  auto [it, inserted] = cache.emplace(key, dft);
  return *it->second;
}

std::vector<double> nonlinear_potential(const NonlinearitySpec& spec, const Grid& grid,
                                        std::span<const cplx> psi) {
  const std::size_t n = psi.size();
  std::vector<double> out(n, 0.0);
  if (spec.has_local()) {
    const auto& p = spec.power;
    const bool cubic = p.s == 2.0;
    // Below theta / 2 (s > 1) the cutoff is identically one.
    const double flat2 = cutoff_sign(p) > 0 ? 0.25 * p.theta * p.theta : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double y2 = std::norm(psi[j]);
      if (y2 < flat2) {
        out[j] = cubic ? y2 : std::pow(y2, 0.5 * p.s);
      } else {
        out[j] = local_gain(p, std::sqrt(y2));
      }
    }
  }
  if (spec.has_nonlocal()) {
    std::vector<double> density(n);
    for (std::size_t j = 0; j < n; ++j) density[j] = std::norm(psi[j]);
    auto conv = Spectral::for_grid(grid)->convolve(hartree_kernel_dft(spec.hartree, grid), density);
    for (std::size_t j = 0; j < n; ++j) out[j] += conv[j];
  }
  return out;
}

WaveField apply_f(const NonlinearitySpec& spec, const WaveField& psi) {
  require_finite(psi, "apply_f");
  auto m = nonlinear_potential(spec, psi.grid, psi.samples);
  WaveField out = psi;
  for (std::size_t j = 0; j < out.size(); ++j) out.samples[j] *= m[j];
  return out;
}

std::vector<cplx> apply_fprime(const NonlinearitySpec& spec, const Grid& grid,
                               std::span<const double> eta, std::span<const cplx> w) {
  const std::size_t n = eta.size();
  std::vector<cplx> out(n, cplx{0.0, 0.0});
  if (spec.has_local()) {
    for (std::size_t j = 0; j < n; ++j) {
      const double y = std::abs(eta[j]);
      const double g = local_gain(spec.power, y);
      const double yg = y * local_gain_derivative(spec.power, y);
      out[j] += g * w[j] + yg * w[j].real();
    }
  }
  if (spec.has_nonlocal()) {
    const auto ops = Spectral::for_grid(grid);
    const auto kernel = hartree_kernel_dft(spec.hartree, grid);
    std::vector<double> density(n), cross(n);
    for (std::size_t j = 0; j < n; ++j) {
      density[j] = eta[j] * eta[j];
      cross[j] = eta[j] * w[j].real();
    }
    auto self = ops->convolve(kernel, density);
    auto mixed = ops->convolve(kernel, cross);
    for (std::size_t j = 0; j < n; ++j) out[j] += self[j] * w[j] + 2.0 * eta[j] * mixed[j];
  }
  return out;
}

WaveField apply_fprime(const NonlinearitySpec& spec, const WaveField& eta, const WaveField& w) {
  require_same_grid(eta.grid, w.grid);
  require_finite(eta, "apply_fprime");
  require_finite(w, "apply_fprime");
  if (eta.imaginary_fraction() > 1e-12) {
    throw Error(ErrorKind::Domain, "apply_fprime: base point eta must be real-valued");
  }
  std::vector<double> base(eta.size());
  for (std::size_t j = 0; j < base.size(); ++j) base[j] = eta.samples[j].real();
  return WaveField(w.grid, apply_fprime(spec, w.grid, base, w.samples), w.time);
}

double potential_F(const NonlinearitySpec& spec, const WaveField& psi) {
  require_finite(psi, "potential_F");
  const double dx = psi.grid.spacing();
  double total = 0.0;
  if (spec.has_local()) {
    for (const auto& z : psi.samples) total += local_potential_density(spec.power, std::abs(z));
  }
  if (spec.has_nonlocal()) {
    const std::size_t n = psi.size();
    std::vector<double> density(n);
    for (std::size_t j = 0; j < n; ++j) density[j] = std::norm(psi.samples[j]);
    auto conv = Spectral::for_grid(psi.grid)
                    ->convolve(hartree_kernel_dft(spec.hartree, psi.grid), density);
    double quartic = 0.0;
    for (std::size_t j = 0; j < n; ++j) quartic += conv[j] * density[j];
    total += 0.25 * quartic;
  }
  return total * dx;
}

}  // namespace solitonlab
