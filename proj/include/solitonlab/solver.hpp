#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "solitonlab/grid.hpp"
#include "solitonlab/nonlinearity.hpp"
#include "solitonlab/potential.hpp"

namespace solitonlab {

class Spectral;

struct SolverConfig {
  double dt = 1e-3;
  /// Steps between frames handed to the observer.
  std::size_t checkpoint_stride = 100;
  std::size_t max_steps = 100'000'000;
  /// Relative charge drift that aborts a run.
  double charge_drift_limit = 1e-6;
  /// max|psi| growth factor that aborts a run.
  double blowup_factor = 1e3;

  void validate() const;
};

/// Strang split step for i psi_t = (-Delta + V_h) psi - f(psi):
/// half phase flow, exact Fourier flow exp(-i k^2 dt), half phase flow.
/// The phase flow multiplies by exp(i (m(|psi|) - V_h) tau) with f = m psi,
/// which leaves |psi| and hence m unchanged over the substep.
class Stepper {
 public:
  Stepper(const Grid& grid, PotentialSpec potential, NonlinearitySpec nl, double dt);

  /// Advances psi in place by dt and stamps psi.time += dt.
  void advance(WaveField& psi) const;
  double dt() const { return dt_; }

 private:
  void phase_flow(std::vector<cplx>& s, double t_mid, double tau) const;

  Grid grid_;
  PotentialSpec potential_;
  NonlinearitySpec nl_;
  double dt_;
  std::vector<cplx> linear_;
  std::vector<double> v_profile_;  // V_h(x_j) without time modulation
  std::shared_ptr<const Spectral> ops_;
  mutable std::vector<cplx> work_;
};

/// One Strang step; throws Error(BlowUp) on non-finite output.
WaveField step(const WaveField& psi, const PotentialSpec& potential, const NonlinearitySpec& nl,
               double dt);

/// Receives the frame and the step index; frames are snapshots.
using FrameObserver = std::function<void(const WaveField& frame, std::size_t step)>;

struct EvolveStats {
  std::size_t steps = 0;
  double dt = 0.0;
  double max_charge_drift = 0.0;
};

/// Integrates from psi0.time to t1 with a uniform step dt' <= config.dt
/// dividing the interval. The observer sees step 0, every checkpoint_stride
/// steps and the final step. Throws Error(ChargeDrift) or Error(BlowUp).
WaveField evolve(const WaveField& psi0, const PotentialSpec& potential, const NonlinearitySpec& nl,
                 double t1, const SolverConfig& config, const FrameObserver& observer = {},
                 EvolveStats* stats = nullptr);

}  // namespace solitonlab
