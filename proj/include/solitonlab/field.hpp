#pragma once

#include <vector>

#include "solitonlab/grid.hpp"
#include "solitonlab/nonlinearity.hpp"
#include "solitonlab/potential.hpp"
#include "solitonlab/profiles.hpp"

namespace solitonlab {

/// Modulation coordinates sigma = (a, v, gamma, mu) of one soliton.
/// gamma is kept unwrapped; canonical_gamma() reduces it to [0, 2 pi).
struct SolitonParams {
  double a = 0.0;
  double v = 0.0;
  double gamma = 0.0;
  double mu = 1.0;

  double canonical_gamma() const;
  bool all_finite() const;
  bool operator==(const SolitonParams&) const = default;
};

/// Element (a, v, gamma) of the Heisenberg group acting by T_{a v gamma}.
struct GroupElement {
  double a = 0.0;
  double v = 0.0;
  double gamma = 0.0;
  bool operator==(const GroupElement&) const = default;
};

/// (a, v, g) . (a', v', g') = (a + a', v + v', g + g' + v a' / 2).
GroupElement compose_group(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);

/// T_{a v gamma} psi = exp(i (v (x - a) / 2 + gamma)) psi(x - a), with the
/// translation done as an exact Fourier shift.
WaveField apply_transform(double a, double v, double gamma, const WaveField& psi);
inline WaveField apply_transform(const GroupElement& g, const WaveField& psi) {
  return apply_transform(g.a, g.v, g.gamma, psi);
}

/// Pieces of a placed soliton, all evaluated at x_j - a.
struct PlacedSoliton {
  std::vector<cplx> phase;   // exp(i (v (x - a) / 2 + gamma))
  std::vector<double> value;  // eta_mu(x - a)
  std::vector<double> deriv;  // eta_mu'(x - a)
  std::vector<double> dmu;    // d_mu eta_mu(x - a)
};

/// Throws Error(Placement) when the tail would reach the periodic boundary.
PlacedSoliton place(const PreparedProfile& prepared, const SolitonParams& sigma);

/// eta_sigma = T_{a v gamma} eta_mu on the profile grid.
WaveField synthesize(const PreparedProfile& prepared, const SolitonParams& sigma);
/// Resamples by band-limited interpolation when grid differs from the profile grid.
WaveField synthesize(const SolitonProfile& profile, const SolitonParams& sigma, const Grid& grid);

/// <u, v> = Re int u conj(v).
double inner(const WaveField& u, const WaveField& v);
/// omega(u, v) = Im int u conj(v) = <u, i v>.
double symplectic(const WaveField& u, const WaveField& v);
/// N(psi) = 1/2 int |psi|^2.
double charge(const WaveField& psi);
double l2_norm(const WaveField& psi);

/// H_V(psi) = 1/2 int |psi'|^2 + 1/2 int V_h(x, t) |psi|^2 - F(psi).
double energy(const WaveField& psi, const PotentialSpec& potential, const NonlinearitySpec& nl,
              double t);

/// 1/2 int (d_t V_h) |psi|^2, the rate of change of H_V along the flow.
double energy_rate(const WaveField& psi, const PotentialSpec& potential, double t);

}  // namespace solitonlab
