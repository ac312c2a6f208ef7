#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace solitonlab {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2). Only dim == 1 is supported.
struct Grid {
  int dim = 1;
  double length = 0.0;
  std::size_t points = 0;

  Grid() = default;
  /// Throws Error(Domain) unless points is a power of two >= 16 and length > 0.
  Grid(double length, std::size_t points);

  double spacing() const { return length / static_cast<double>(points); }
  double x(std::size_t j) const { return -0.5 * length + static_cast<double>(j) * spacing(); }
  std::vector<double> coordinates() const;

  /// Wraps a position onto [-L/2, L/2).
  double wrap(double position) const;

  bool operator==(const Grid&) const = default;
};

void require_same_grid(const Grid& a, const Grid& b);

/// Complex samples psi(x_j) on a grid, stamped with a time.
struct WaveField {
  Grid grid;
  std::vector<cplx> samples;
  double time = 0.0;

  WaveField() = default;
  WaveField(Grid g, std::vector<cplx> s, double t = 0.0);

  static WaveField zeros(const Grid& g, double t = 0.0);
  static WaveField from_real(const Grid& g, std::span<const double> values, double t = 0.0);

  std::size_t size() const { return samples.size(); }
  bool all_finite() const;
  double max_abs() const;
  /// Largest |Im| relative to the largest |Re|; used to check real base points.
  double imaginary_fraction() const;

  WaveField& operator+=(const WaveField& other);
  WaveField& operator-=(const WaveField& other);
  WaveField& operator*=(cplx factor);
};

WaveField operator+(WaveField a, const WaveField& b);
WaveField operator-(WaveField a, const WaveField& b);
WaveField operator*(cplx factor, WaveField a);

void require_finite(const WaveField& psi, const char* what);

}  // namespace solitonlab
