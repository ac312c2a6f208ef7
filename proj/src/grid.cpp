#include "solitonlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "solitonlab/error.hpp"

namespace solitonlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::OrbitalStability: return "orbital-stability";
    case ErrorKind::Placement: return "placement";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::ChargeDrift: return "charge-drift";
    case ErrorKind::DegenerateFrame: return "degenerate-frame";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
  }
  return "unknown";
}

Grid::Grid(double length_, std::size_t points_) : dim(1), length(length_), points(points_) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::Domain, fmt::format("grid length must be positive, got {}", length));
  }
  if (points < 16 || (points & (points - 1)) != 0) {
    throw Error(ErrorKind::Domain,
                fmt::format("grid points must be a power of two >= 16, got {}", points));
  }
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> xs(points);
  for (std::size_t j = 0; j < points; ++j) xs[j] = x(j);
  return xs;
}

double Grid::wrap(double position) const {
  double shifted = std::fmod(position + 0.5 * length, length);
  if (shifted < 0.0) shifted += length;
  return shifted - 0.5 * length;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::GridMismatch,
                fmt::format("grid mismatch: (L={}, n={}) vs (L={}, n={})", a.length, a.points,
                            b.length, b.points));
  }
}

WaveField::WaveField(Grid g, std::vector<cplx> s, double t)
    : grid(g), samples(std::move(s)), time(t) {
  if (samples.size() != grid.points) {
    throw Error(ErrorKind::GridMismatch,
                fmt::format("field has {} samples for a {}-point grid", samples.size(),
                            grid.points));
  }
}

WaveField WaveField::zeros(const Grid& g, double t) {
  return WaveField(g, std::vector<cplx>(g.points, cplx{0.0, 0.0}), t);
}

WaveField WaveField::from_real(const Grid& g, std::span<const double> values, double t) {
  std::vector<cplx> s(values.begin(), values.end());
  return WaveField(g, std::move(s), t);
}

bool WaveField::all_finite() const {
  return std::all_of(samples.begin(), samples.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double WaveField::max_abs() const {
  double m = 0.0;
  for (const auto& z : samples) m = std::max(m, std::abs(z));
  return m;
}

double WaveField::imaginary_fraction() const {
  double re = 0.0;
  double im = 0.0;
  for (const auto& z : samples) {
    re = std::max(re, std::abs(z.real()));
    im = std::max(im, std::abs(z.imag()));
  }
  return re > 0.0 ? im / re : im;
}

WaveField& WaveField::operator+=(const WaveField& other) {
  require_same_grid(grid, other.grid);
  for (std::size_t j = 0; j < samples.size(); ++j) samples[j] += other.samples[j];
  return *this;
}

WaveField& WaveField::operator-=(const WaveField& other) {
  require_same_grid(grid, other.grid);
  for (std::size_t j = 0; j < samples.size(); ++j) samples[j] -= other.samples[j];
  return *this;
}

WaveField& WaveField::operator*=(cplx factor) {
  for (auto& z : samples) z *= factor;
  return *this;
}

WaveField operator+(WaveField a, const WaveField& b) { return a += b; }
WaveField operator-(WaveField a, const WaveField& b) { return a -= b; }
WaveField operator*(cplx factor, WaveField a) { return a *= factor; }

void require_finite(const WaveField& psi, const char* what) {
  if (!psi.all_finite()) {
    throw Error(ErrorKind::NonFinite, fmt::format("{}: field contains non-finite samples", what));
  }
}

}  // namespace solitonlab
