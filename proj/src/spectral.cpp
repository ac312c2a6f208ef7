#include "solitonlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace

Spectral::Spectral(const Grid& grid) : grid_(grid), k_(grid.points) {
  const std::size_t n = grid.points;
  const double dk = 2.0 * std::numbers::pi / grid.length;
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_j = j < n / 2 ? static_cast<double>(j)
                                    : static_cast<double>(j) - static_cast<double>(n);
    k_[j] = signed_j * dk;
  }

  std::vector<cplx> a(n), b(n);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(a.data()), as_fftw(b.data()),
                                   FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(a.data()), as_fftw(b.data()),
                                   FFTW_BACKWARD, flags);
  if (!forward_plan_ || !inverse_plan_) throw Error(ErrorKind::Domain, "FFTW planning failed");
}

Spectral::~Spectral() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::shared_ptr<const Spectral> Spectral::for_grid(const Grid& grid) {
  // The planner mutex must outlive the cache, whose destructor frees plans.
  planner_mutex();
  static std::mutex cache_mutex;
  static std::map<std::pair<double, std::size_t>, std::shared_ptr<const Spectral>> cache;
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(grid.length, grid.points);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto ops = std::make_shared<const Spectral>(grid);
  cache.emplace(key, ops);
  return ops;
}

void Spectral::forward(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()),
                   as_fftw(out.data()));
}

void Spectral::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(in.data()),
                   as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(grid_.points);
  for (auto& z : out) z *= scale;
}

std::vector<cplx> Spectral::forward(std::span<const cplx> in) const {
  std::vector<cplx> out(in.size());
  forward(in, out);
  return out;
}

std::vector<cplx> Spectral::inverse(std::span<const cplx> in) const {
  std::vector<cplx> out(in.size());
  inverse(in, out);
  return out;
}

std::vector<cplx> Spectral::derivative(std::span<const cplx> f) const {
  auto spec = forward(f);
  const std::size_t nyquist = grid_.points / 2;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    spec[j] *= j == nyquist ? cplx{0.0, 0.0} : cplx{0.0, k_[j]};
  }
  return inverse(spec);
}

std::vector<double> Spectral::derivative(std::span<const double> f) const {
  std::vector<cplx> z(f.begin(), f.end());
  auto d = derivative(std::span<const cplx>(z));
  std::vector<double> out(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) out[j] = d[j].real();
  return out;
}

std::vector<cplx> Spectral::laplacian(std::span<const cplx> f) const {
  auto spec = forward(f);
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= -k_[j] * k_[j];
  return inverse(spec);
}

std::vector<double> Spectral::laplacian(std::span<const double> f) const {
  std::vector<cplx> z(f.begin(), f.end());
  auto d = laplacian(std::span<const cplx>(z));
  std::vector<double> out(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) out[j] = d[j].real();
  return out;
}

std::vector<cplx> Spectral::translate(std::span<const cplx> f, double a) const {
  return translate_spectrum(forward(f), a);
}

std::vector<cplx> Spectral::translate_spectrum(std::span<const cplx> spectrum, double a) const {
  std::vector<cplx> shifted(spectrum.size());
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    shifted[j] = spectrum[j] * std::polar(1.0, -k_[j] * a);
  }
  return inverse(shifted);
}

std::vector<double> Spectral::convolve(std::span<const cplx> kernel_dft,
                                       std::span<const double> g) const {
  std::vector<cplx> z(g.begin(), g.end());
  auto spec = forward(z);
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= kernel_dft[j];
  inverse(spec, z);
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = z[j].real();
  return out;
}

}  // namespace solitonlab
