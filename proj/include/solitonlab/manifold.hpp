#pragma once

#include <array>
#include <iosfwd>

#include <Eigen/Dense>

#include "solitonlab/field.hpp"
#include "solitonlab/profiles.hpp"

namespace solitonlab {

inline constexpr int kFrameSize = 4;
using FrameMatrix = Eigen::Matrix<double, kFrameSize, kFrameSize>;

/// Index of each tangent direction: translation -d/dx, boost i x, gauge i, scaling d/dmu.
enum FrameIndex : int { kTranslation = 0, kBoost = 1, kGauge = 2, kScaling = 3 };

/// Symmetry generators acting on arbitrary fields: e1 = -d/dx, e2 = i x, e3 = i.
enum class Generator { Translation, Boost, Gauge };
WaveField apply_generator(Generator g, const WaveField& phi);

/// Tangent vectors e_alpha eta_sigma at a point of the soliton manifold.
/// The scaling vector is T_{a v gamma} d_mu eta_mu.
struct TangentFrame {
  SolitonParams sigma;
  WaveField soliton;
  std::array<WaveField, kFrameSize> vectors;
};

TangentFrame tangent_frame(const PreparedProfile& prepared, const SolitonParams& sigma);

struct SymplecticMatrix {
  enum class Provenance { ClosedForm, Numeric };
  FrameMatrix entries = FrameMatrix::Zero();
  Provenance provenance = Provenance::Numeric;

  double antisymmetry_defect() const;
  double smallest_singular_value() const;
};

/// Omega_sigma built from m(mu) and m'(mu). Throws Error(OrbitalStability) for m' <= 0.
SymplecticMatrix omega_matrix_closed(const SolitonParams& sigma, double mass, double mass_slope);

/// Entries <e_alpha eta_sigma, i e_beta eta_sigma> by quadrature.
SymplecticMatrix omega_matrix_numeric(const TangentFrame& frame);

/// L_mu w = -w'' + mu w - f'(eta_mu) w on the profile grid.
WaveField hessian_apply(const SolitonProfile& profile, const WaveField& w);

/// omega(e_alpha eta_sigma1, e_beta eta_sigma2) by direct quadrature.
FrameMatrix cross_pairing(const PreparedProfile& p1, const SolitonParams& sigma1,
                          const PreparedProfile& p2, const SolitonParams& sigma2);
FrameMatrix cross_pairing(const TangentFrame& f1, const TangentFrame& f2);

/// Row-major CSV with 17 significant digits.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace solitonlab
