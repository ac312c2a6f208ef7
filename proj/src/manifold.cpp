#include "solitonlab/manifold.hpp"

#include <ostream>

#include <fmt/format.h>

#include "solitonlab/error.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

namespace {

constexpr cplx kI{0.0, 1.0};

}  // namespace

WaveField apply_generator(Generator g, const WaveField& phi) {
  WaveField out = phi;
  switch (g) {
    case Generator::Translation: {
      out.samples = Spectral::for_grid(phi.grid)->derivative(phi.samples);
      out *= -1.0;
      break;
    }
    case Generator::Boost:
      for (std::size_t j = 0; j < out.size(); ++j) out.samples[j] *= kI * phi.grid.x(j);
      break;
    case Generator::Gauge:
      out *= kI;
      break;
  }
  return out;
}

TangentFrame tangent_frame(const PreparedProfile& prepared, const SolitonParams& sigma) {
  const auto placed = place(prepared, sigma);
  const Grid& grid = prepared.profile->grid;
  const std::size_t n = grid.points;
  std::vector<cplx> u(n), et(n), eb(n), eg(n), es(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx ph = placed.phase[j];
    u[j] = ph * placed.value[j];
    // -d/dx of exp(i (v (x - a) / 2 + gamma)) eta(x - a)
    et[j] = -ph * (placed.deriv[j] + 0.5 * kI * sigma.v * placed.value[j]);
    eb[j] = kI * grid.x(j) * u[j];
    eg[j] = kI * u[j];
    es[j] = ph * placed.dmu[j];
  }
  TangentFrame f;
  f.sigma = sigma;
  f.soliton = WaveField(grid, std::move(u));
  f.vectors = {WaveField(grid, std::move(et)), WaveField(grid, std::move(eb)),
               WaveField(grid, std::move(eg)), WaveField(grid, std::move(es))};
  return f;
}

double SymplecticMatrix::antisymmetry_defect() const {
  return (entries + entries.transpose()).cwiseAbs().maxCoeff();
}

double SymplecticMatrix::smallest_singular_value() const {
  Eigen::JacobiSVD<FrameMatrix> svd(entries);
  return svd.singularValues().minCoeff();
}

SymplecticMatrix omega_matrix_closed(const SolitonParams& sigma, double mass, double mass_slope) {
  if (!(mass_slope > 0.0)) {
    throw Error(ErrorKind::OrbitalStability,
                fmt::format("m'(mu) = {} is not positive at mu = {}", mass_slope, sigma.mu));
  }
  const double m = mass, dm = mass_slope, a = sigma.a, v = sigma.v;
  SymplecticMatrix out;
  out.provenance = SymplecticMatrix::Provenance::ClosedForm;
  out.entries << 0.0, -m, 0.0, -0.5 * v * dm,
                 m, 0.0, 0.0, a * dm,
                 0.0, 0.0, 0.0, dm,
                 0.5 * v * dm, -a * dm, -dm, 0.0;
  return out;
}

SymplecticMatrix omega_matrix_numeric(const TangentFrame& frame) {
  SymplecticMatrix out;
  out.provenance = SymplecticMatrix::Provenance::Numeric;
  for (int r = 0; r < kFrameSize; ++r) {
    out.entries(r, r) = 0.0;
    for (int c = r + 1; c < kFrameSize; ++c) {
      // <X, i Y> = omega(X, Y)
      const double w = symplectic(frame.vectors[r], frame.vectors[c]);
      out.entries(r, c) = w;
      out.entries(c, r) = -w;
    }
  }
  return out;
}

WaveField hessian_apply(const SolitonProfile& profile, const WaveField& w) {
  require_same_grid(profile.grid, w.grid);
  const auto ops = Spectral::for_grid(w.grid);
  const auto lap = ops->laplacian(w.samples);
  const auto fp = apply_fprime(profile.spec, w.grid, profile.samples, w.samples);
  std::vector<cplx> out(w.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = -lap[j] + profile.mu * w.samples[j] - fp[j];
  }
  return WaveField(w.grid, std::move(out), w.time);
}

FrameMatrix cross_pairing(const TangentFrame& f1, const TangentFrame& f2) {
  FrameMatrix out;
  for (int r = 0; r < kFrameSize; ++r) {
    for (int c = 0; c < kFrameSize; ++c) out(r, c) = symplectic(f1.vectors[r], f2.vectors[c]);
  }
  return out;
}

FrameMatrix cross_pairing(const PreparedProfile& p1, const SolitonParams& sigma1,
                          const PreparedProfile& p2, const SolitonParams& sigma2) {
  require_same_grid(p1.profile->grid, p2.profile->grid);
  return cross_pairing(tangent_frame(p1, sigma1), tangent_frame(p2, sigma2));
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << fmt::format("{:.17g}", m(r, c));
    }
    out << '\n';
  }
}

}  // namespace solitonlab
