#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "solitonlab/field.hpp"
#include "solitonlab/grid.hpp"

namespace testing {

using solitonlab::cplx;
using solitonlab::Grid;
using solitonlab::WaveField;

inline double sech(double x) { return 1.0 / std::cosh(x); }

/// Closed-form cubic ground state sqrt(2 mu) sech(sqrt(mu) x).
inline double cubic_eta(double mu, double x) { return std::sqrt(2.0 * mu) * sech(std::sqrt(mu) * x); }

inline WaveField cubic_field(const Grid& g, double mu) {
  std::vector<cplx> s(g.points);
  for (std::size_t j = 0; j < g.points; ++j) s[j] = cubic_eta(mu, g.x(j));
  return WaveField(g, std::move(s));
}

/// Moving cubic soliton e^{i(v (x - a) / 2 + gamma)} eta(x - a), from the closed form.
inline WaveField cubic_soliton(const Grid& g, double a, double v, double gamma, double mu) {
  std::vector<cplx> s(g.points);
  for (std::size_t j = 0; j < g.points; ++j) {
    const double y = g.x(j) - a;
    s[j] = std::polar(cubic_eta(mu, y), 0.5 * v * y + gamma);
  }
  return WaveField(g, std::move(s));
}

/// Smooth localized random field: a few Gaussian packets with random phases.
inline WaveField random_smooth(const Grid& g, std::uint64_t seed, double spread = 0.2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> s(g.points, cplx{0.0, 0.0});
  const double half = 0.5 * g.length;
  for (int p = 0; p < 4; ++p) {
    const double c = spread * half * u(rng);
    const double w = 1.0 + 0.5 * (u(rng) + 1.0);
    const double k = 2.0 * u(rng);
    const cplx amp{u(rng), u(rng)};
    for (std::size_t j = 0; j < g.points; ++j) {
      const double y = (g.x(j) - c) / w;
      s[j] += amp * std::exp(-0.5 * y * y) * std::polar(1.0, k * g.x(j));
    }
  }
  return WaveField(g, std::move(s));
}

inline double max_abs_diff(const WaveField& a, const WaveField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.samples[j] - b.samples[j]));
  return m;
}

inline double l2_diff(const WaveField& a, const WaveField& b) { return solitonlab::l2_norm(a - b); }

inline double wrap(double x) {
  const double tau = 2.0 * 3.14159265358979323846;
  return x - tau * std::round(x / tau);
}

}  // namespace testing
