#include "solitonlab/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "solitonlab/error.hpp"
#include "solitonlab/field.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::Config, fmt::format("time step dt={} must be positive", dt));
  }
  if (checkpoint_stride == 0) throw Error(ErrorKind::Config, "checkpoint stride must be >= 1");
  if (max_steps == 0) throw Error(ErrorKind::Config, "max_steps must be >= 1");
}

Stepper::Stepper(const Grid& grid, PotentialSpec potential, NonlinearitySpec nl, double dt)
    : grid_(grid), potential_(std::move(potential)), nl_(std::move(nl)), dt_(dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Config, "time step must be positive");
  potential_.validate();
  nl_.validate();
  ops_ = Spectral::for_grid(grid_);
  work_.resize(grid_.points);
  const auto k = ops_->wavenumbers();
  linear_.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) linear_[j] = std::polar(1.0, -k[j] * k[j] * dt_);
  if (!potential_.is_zero()) {
    PotentialSpec frozen = potential_;
    frozen.modulation = 0.0;
    v_profile_.resize(grid_.points);
    for (std::size_t j = 0; j < grid_.points; ++j) {
      v_profile_[j] = eval_potential(frozen, grid_.x(j), 0.0).value;
    }
  }
}

void Stepper::phase_flow(std::vector<cplx>& s, double t_mid, double tau) const {
  const auto m = nonlinear_potential(nl_, grid_, s);
  const double mod = potential_.time_dependent() ? std::cos(potential_.modulation * t_mid) : 1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double v = v_profile_.empty() ? 0.0 : mod * v_profile_[j];
    const double th = (m[j] - v) * tau;
    s[j] *= cplx{std::cos(th), std::sin(th)};
  }
}

void Stepper::advance(WaveField& psi) const {
  require_same_grid(psi.grid, grid_);
  const double t = psi.time;
  phase_flow(psi.samples, t + 0.25 * dt_, 0.5 * dt_);
  ops_->forward(psi.samples, work_);
  for (std::size_t j = 0; j < work_.size(); ++j) work_[j] *= linear_[j];
  ops_->inverse(work_, psi.samples);
  phase_flow(psi.samples, t + 0.75 * dt_, 0.5 * dt_);
  psi.time = t + dt_;
}

WaveField step(const WaveField& psi, const PotentialSpec& potential, const NonlinearitySpec& nl,
               double dt) {
  require_finite(psi, "step input");
  WaveField out = psi;
  Stepper(psi.grid, potential, nl, dt).advance(out);
  if (!out.all_finite()) throw Error(ErrorKind::BlowUp, "non-finite field after one step");
  return out;
}

WaveField evolve(const WaveField& psi0, const PotentialSpec& potential, const NonlinearitySpec& nl,
                 double t1, const SolverConfig& config, const FrameObserver& observer,
                 EvolveStats* stats) {
  config.validate();
  require_finite(psi0, "initial field");
  const double t0 = psi0.time;
  if (!(t1 > t0)) {
    throw Error(ErrorKind::Domain, fmt::format("end time {} must exceed start time {}", t1, t0));
  }
  const double span = t1 - t0;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / config.dt - 1e-9)));
  if (steps > config.max_steps) {
    throw Error(ErrorKind::Config,
                fmt::format("{} steps needed but max_steps is {}", steps, config.max_steps));
  }
  const double dt = span / static_cast<double>(steps);
  const Stepper stepper(psi0.grid, potential, nl, dt);

  const double n0 = charge(psi0);
  const double peak0 = psi0.max_abs();
  double worst = 0.0;
  WaveField psi = psi0;
  if (observer) observer(psi, 0);
  for (std::size_t s = 1; s <= steps; ++s) {
    stepper.advance(psi);
    psi.time = t0 + static_cast<double>(s) * dt;
    const double peak = psi.max_abs();
    if (!std::isfinite(peak) || peak > config.blowup_factor * peak0) {
      throw Error(ErrorKind::BlowUp,
                  fmt::format("max|psi| = {:.3e} at t = {} exceeds {:.0e} x initial", peak,
                              psi.time, config.blowup_factor));
    }
    const double drift = n0 > 0.0 ? std::abs(charge(psi) - n0) / n0 : 0.0;
    worst = std::max(worst, drift);
    if (drift > config.charge_drift_limit) {
      throw Error(ErrorKind::ChargeDrift,
                  fmt::format("relative charge drift {:.3e} at t = {}", drift, psi.time));
    }
    if (observer && (s % config.checkpoint_stride == 0 || s == steps)) observer(psi, s);
  }
  if (stats != nullptr) *stats = {steps, dt, worst};
  return psi;
}

}  // namespace solitonlab
