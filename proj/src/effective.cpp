#include "solitonlab/effective.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

EffectiveState axpy(const EffectiveState& x, double h, const EffectiveState& d) {
  EffectiveState out = x;
  for (std::size_t i = 0; i < out.solitons.size(); ++i) {
    auto& s = out.solitons[i];
    const auto& k = d.solitons[i];
    s.a += h * k.a;
    s.v += h * k.v;
    s.gamma += h * k.gamma;
    s.mu += h * k.mu;
  }
  out.t = x.t + h;
  return out;
}

}  // namespace

EffectiveState rhs(const EffectiveState& state, const PotentialSpec& potential) {
  EffectiveState d;
  d.t = 1.0;
  d.solitons.reserve(state.solitons.size());
  for (const auto& s : state.solitons) {
    const auto p = eval_potential(potential, s.a, state.t);
    d.solitons.push_back({s.v, -2.0 * p.gradient, s.mu + 0.25 * s.v * s.v - p.value, 0.0});
  }
  return d;
}

EffectiveState rk4_step(const EffectiveState& state, const PotentialSpec& potential, double dt) {
  const auto k1 = rhs(state, potential);
  const auto k2 = rhs(axpy(state, 0.5 * dt, k1), potential);
  const auto k3 = rhs(axpy(state, 0.5 * dt, k2), potential);
  const auto k4 = rhs(axpy(state, dt, k3), potential);
  EffectiveState out = state;
  for (std::size_t i = 0; i < out.solitons.size(); ++i) {
    auto& s = out.solitons[i];
    const auto& a = k1.solitons[i];
    const auto& b = k2.solitons[i];
    const auto& c = k3.solitons[i];
    const auto& e = k4.solitons[i];
    s.a += dt / 6.0 * (a.a + 2.0 * b.a + 2.0 * c.a + e.a);
    s.v += dt / 6.0 * (a.v + 2.0 * b.v + 2.0 * c.v + e.v);
    s.gamma += dt / 6.0 * (a.gamma + 2.0 * b.gamma + 2.0 * c.gamma + e.gamma);
  }
  out.t = state.t + dt;
  return out;
}

std::vector<EffectiveState> integrate(const EffectiveState& state0, const PotentialSpec& potential,
                                      double t1, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Domain, fmt::format("dt={} must be positive", dt));
  if (!(t1 >= state0.t)) {
    throw Error(ErrorKind::Domain, fmt::format("end time {} precedes {}", t1, state0.t));
  }
  const double span = t1 - state0.t;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  std::vector<EffectiveState> out;
  out.reserve(steps + 1);
  out.push_back(state0);
  if (steps == 0) return out;
  const double h = span / static_cast<double>(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    auto next = rk4_step(out.back(), potential, h);
    next.t = state0.t + static_cast<double>(k) * h;
    out.push_back(std::move(next));
  }
  return out;
}

EffectiveState sample_trajectory(const std::vector<EffectiveState>& trajectory, double t) {
  if (trajectory.empty()) throw Error(ErrorKind::Domain, "empty trajectory");
  if (t <= trajectory.front().t) return trajectory.front();
  if (t >= trajectory.back().t) return trajectory.back();
  const auto it = std::lower_bound(trajectory.begin(), trajectory.end(), t,
                                   [](const EffectiveState& s, double x) { return s.t < x; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  EffectiveState out = lo;
  out.t = t;
  for (std::size_t i = 0; i < out.solitons.size(); ++i) {
    auto& s = out.solitons[i];
    const auto& b = hi.solitons[i];
    s.a += w * (b.a - s.a);
    s.v += w * (b.v - s.v);
    s.gamma += w * (b.gamma - s.gamma);
    s.mu += w * (b.mu - s.mu);
  }
  return out;
}

double classical_energy(const SolitonParams& s, const PotentialSpec& potential, double t) {
  return 0.25 * s.v * s.v + eval_potential(potential, s.a, t).value;
}

}  // namespace solitonlab
