#pragma once

#include <memory>
#include <span>
#include <vector>

#include "solitonlab/grid.hpp"

namespace solitonlab {

/// FFT-backed spectral operators for one periodic grid.
///
/// Instances are immutable after construction and shared through
/// Spectral::for_grid; every method is safe to call concurrently.
/// Forward transforms are unnormalized, inverse transforms divide by n.
class Spectral {
 public:
  explicit Spectral(const Grid& grid);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  static std::shared_ptr<const Spectral> for_grid(const Grid& grid);

  const Grid& grid() const { return grid_; }
  /// Angular wavenumbers in FFT order; the Nyquist entry is -pi/dx.
  std::span<const double> wavenumbers() const { return k_; }

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;
  std::vector<cplx> forward(std::span<const cplx> in) const;
  std::vector<cplx> inverse(std::span<const cplx> in) const;

  std::vector<cplx> derivative(std::span<const cplx> f) const;
  std::vector<double> derivative(std::span<const double> f) const;
  /// Second derivative (the 1-D Laplacian).
  std::vector<cplx> laplacian(std::span<const cplx> f) const;
  std::vector<double> laplacian(std::span<const double> f) const;
  /// Band-limited translation f(x) -> f(x - a).
  std::vector<cplx> translate(std::span<const cplx> f, double a) const;
  /// Multiplies a spectrum by exp(-i k a) and transforms back.
  std::vector<cplx> translate_spectrum(std::span<const cplx> spectrum, double a) const;
  /// Periodic circular convolution sum_l kernel(x_j - x_l) g_l dx, with the
  /// kernel given by its DFT (already multiplied by dx).
  std::vector<double> convolve(std::span<const cplx> kernel_dft, std::span<const double> g) const;

 private:
  Grid grid_;
  std::vector<double> k_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace solitonlab
