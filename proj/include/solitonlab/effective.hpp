#pragma once

#include <vector>

#include "solitonlab/field.hpp"
#include "solitonlab/potential.hpp"

namespace solitonlab {

/// Modulation parameters of every soliton at time t.
struct EffectiveState {
  std::vector<SolitonParams> solitons;
  double t = 0.0;
};

/// Leading-order flow for each soliton, uncoupled:
/// a' = v, v' = -2 grad V_h(a, t), gamma' = mu + v^2 / 4 - V_h(a, t), mu' = 0.
/// The returned state holds the derivatives; its t is 1.
EffectiveState rhs(const EffectiveState& state, const PotentialSpec& potential);

/// Classical RK4 from state0.t to t1 with a uniform step no larger than dt.
/// The trajectory includes both end points.
std::vector<EffectiveState> integrate(const EffectiveState& state0, const PotentialSpec& potential,
                                      double t1, double dt);

/// One RK4 step.
EffectiveState rk4_step(const EffectiveState& state, const PotentialSpec& potential, double dt);

/// Linear interpolation of a trajectory at time t (clamped to its ends).
EffectiveState sample_trajectory(const std::vector<EffectiveState>& trajectory, double t);

/// v^2 / 4 + V_h(a, t) for one particle.
double classical_energy(const SolitonParams& s, const PotentialSpec& potential, double t);

}  // namespace solitonlab
