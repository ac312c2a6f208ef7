#include "solitonlab/decomposition.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "solitonlab/error.hpp"
#include "solitonlab/io.hpp"
#include "solitonlab/manifold.hpp"

namespace solitonlab {

namespace {

constexpr int kCoords = 4;

double& coord(SolitonParams& s, int c) {
  switch (c) {
    case 0: return s.a;
    case 1: return s.v;
    case 2: return s.gamma;
    default: return s.mu;
  }
}

void check_interval(const std::vector<SolitonParams>& sigmas, const DecompositionOptions& o) {
  for (const auto& s : sigmas) {
    if (!s.all_finite()) throw Error(ErrorKind::NonFinite, "soliton parameters are not finite");
    if (s.mu < o.mu_min || s.mu > o.mu_max) {
      throw Error(ErrorKind::Domain,
                  fmt::format("mu = {} outside I0 = [{}, {}]", s.mu, o.mu_min, o.mu_max));
    }
  }
}

struct Evaluation {
  std::vector<TangentFrame> frames;
  WaveField remainder;
  Eigen::VectorXd g;
};

Evaluation evaluate(const WaveField& psi, const std::vector<SolitonParams>& sigmas,
                    ProfileCache& profiles) {
  require_same_grid(psi.grid, profiles.grid());
  Evaluation e;
  e.remainder = psi;
  e.frames.reserve(sigmas.size());
  for (const auto& s : sigmas) {
    e.frames.push_back(tangent_frame(*profiles.get(s.mu), s));
    e.remainder -= e.frames.back().soliton;
  }
  e.g.resize(static_cast<Eigen::Index>(kCoords * sigmas.size()));
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    for (int b = 0; b < kCoords; ++b) {
      e.g(static_cast<Eigen::Index>(kCoords * i + b)) =
          symplectic(e.remainder, e.frames[i].vectors[b]);
    }
  }
  return e;
}

Eigen::MatrixXd jacobian(const WaveField& psi, const std::vector<SolitonParams>& sigmas,
                         const Evaluation& base, ProfileCache& profiles,
                         const DecompositionOptions& o) {
  const auto dim = static_cast<Eigen::Index>(kCoords * sigmas.size());
  Eigen::MatrixXd j(dim, dim);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    for (int c = 0; c < kCoords; ++c) {
      auto shifted = sigmas;
      double& x = coord(shifted[i], c);
      double h = o.fd_step * std::max(1.0, std::abs(x));
      // Stay inside I0 at its upper end.
      if (c == 3 && x + h > o.mu_max) h = -h;
      x += h;
      const Evaluation e = evaluate(psi, shifted, profiles);
      j.col(static_cast<Eigen::Index>(kCoords * i + c)) = (e.g - base.g) / h;
    }
  }
  return j;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

DecompositionResult finish(const Evaluation& e, std::vector<SolitonParams> sigmas, int iterations,
                           double tolerance, double time) {
  DecompositionResult r;
  r.solitons = std::move(sigmas);
  r.fluctuation = e.remainder;
  r.fluctuation.time = time;
  r.residual_norm = max_abs(e.g);
  r.tolerance = tolerance;
  r.iterations = iterations;
  r.w_l2 = l2_norm(e.remainder);
  r.time = time;
  return r;
}

}  // namespace

Eigen::VectorXd g_residual(const WaveField& psi, const std::vector<SolitonParams>& sigmas,
                           ProfileCache& profiles, const DecompositionOptions& options) {
  check_interval(sigmas, options);
  return evaluate(psi, sigmas, profiles).g;
}

Eigen::VectorXd g_residual(const WaveField& psi, const SolitonParams& sigma1,
                           const SolitonParams& sigma2, ProfileCache& profiles,
                           const DecompositionOptions& options) {
  return g_residual(psi, std::vector<SolitonParams>{sigma1, sigma2}, profiles, options);
}

Eigen::MatrixXd g_jacobian(const WaveField& psi, const std::vector<SolitonParams>& sigmas,
                           ProfileCache& profiles, const DecompositionOptions& options) {
  check_interval(sigmas, options);
  const Evaluation base = evaluate(psi, sigmas, profiles);
  return jacobian(psi, sigmas, base, profiles, options);
}

DecompositionResult decompose(const WaveField& psi, const std::vector<SolitonParams>& guesses,
                              ProfileCache& profiles, const DecompositionOptions& options) {
  if (guesses.empty()) throw Error(ErrorKind::Domain, "at least one soliton guess is required");
  require_finite(psi, "decomposition input");
  check_interval(guesses, options);
  const double norm2 = 2.0 * charge(psi);
  const double tol = options.tolerance_scale * (1.0 + norm2);

  std::vector<SolitonParams> x = guesses;
  Evaluation e = evaluate(psi, x, profiles);
  double res = max_abs(e.g);
  int polish = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd j = jacobian(psi, x, e, profiles, options);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!(cond <= options.condition_limit)) {
      throw Error(ErrorKind::DegenerateFrame,
                  fmt::format("decomposition Jacobian condition number {:.3e} exceeds {:.0e}",
                              cond, options.condition_limit));
    }
    const Eigen::VectorXd delta = j.partialPivLu().solve(-e.g);

    // Backtrack on the residual, keeping every mu inside I0.
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
      auto trial = x;
      bool inside = true;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        for (int c = 0; c < kCoords; ++c) {
          coord(trial[i], c) += lambda * delta(static_cast<Eigen::Index>(kCoords * i + c));
        }
        inside = inside && trial[i].mu >= options.mu_min && trial[i].mu <= options.mu_max;
      }
      if (!inside) continue;
      Evaluation te;
      try {
        te = evaluate(psi, trial, profiles);
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::Placement) continue;
        throw;
      }
      const double tres = max_abs(te.g);
      if (tres < res || (res <= tol && tres <= tol)) {
        const bool improved = tres < res;
        x = std::move(trial);
        e = std::move(te);
        res = tres;
        accepted = improved;
        break;
      }
    }
    if (res <= tol) {
      if (!accepted || ++polish > options.polish_iterations) return finish(e, x, it, tol, psi.time);
      continue;
    }
    if (!accepted) break;
  }
  if (res <= tol) return finish(e, x, options.max_iterations, tol, psi.time);
  throw ConvergenceError(
      fmt::format("decomposition did not converge: residual {:.3e} above tolerance {:.3e}", res,
                  tol),
      res, options.max_iterations);
}

DecompositionResult decompose(const WaveField& psi, const SolitonParams& guess1,
                              const SolitonParams& guess2, ProfileCache& profiles,
                              const DecompositionOptions& options) {
  return decompose(psi, std::vector<SolitonParams>{guess1, guess2}, profiles, options);
}

Tracker::Tracker(ProfileCache& profiles, std::vector<SolitonParams> initial,
                 PotentialSpec potential, DecompositionOptions options)
    : profiles_(profiles),
      potential_(std::move(potential)),
      options_(options),
      last_(std::move(initial)) {}

std::vector<SolitonParams> Tracker::predict(double t) const {
  if (!started_) return last_;
  const double dt = t - last_time_;
  auto out = last_;
  for (auto& s : out) {
    const auto p = eval_potential(potential_, s.a, last_time_);
    s.a += s.v * dt - p.gradient * dt * dt;
    s.v += -2.0 * p.gradient * dt;
    s.gamma += (s.mu + 0.25 * s.v * s.v - p.value) * dt;
  }
  return out;
}

const DecompositionResult& Tracker::next(const WaveField& frame) {
  const auto guess = predict(frame.time);
  DecompositionResult r;
  try {
    r = decompose(frame, guess, profiles_, options_);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(fmt::format("frame {} (t = {}): {}", history_.size(), frame.time,
                                       e.what()),
                           e.last_residual(), e.iterations());
  } catch (const Error& e) {
    throw Error(e.kind(),
                fmt::format("frame {} (t = {}): {}", history_.size(), frame.time, e.what()));
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < r.solitons.size(); ++i) {
    auto& g = r.solitons[i].gamma;
    g -= two_pi * std::round((g - guess[i].gamma) / two_pi);
  }
  last_ = r.solitons;
  last_time_ = frame.time;
  started_ = true;
  history_.push_back(std::move(r));
  return history_.back();
}

std::vector<DecompositionResult> track(const std::vector<WaveField>& frames,
                                       const SolitonParams& sigma1, const SolitonParams& sigma2,
                                       ProfileCache& profiles,
                                       const DecompositionOptions& options) {
  Tracker tracker(profiles, {sigma1, sigma2}, {}, options);
  for (const auto& f : frames) tracker.next(f);
  return tracker.history();
}

void write_track_csv(std::ostream& out, const std::vector<DecompositionResult>& series) {
  std::vector<SeriesRow> rows;
  rows.reserve(series.size());
  for (const auto& r : series) {
    rows.push_back({r.time, r.solitons, r.w_l2, r.residual_norm, r.iterations});
  }
  write_series_csv(out, rows);
}

}  // namespace solitonlab
