#include "solitonlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <json.hpp>

#include "solitonlab/effective.hpp"
#include "solitonlab/error.hpp"
#include "solitonlab/io.hpp"
#include "solitonlab/solver.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

double compute_tau_alpha(double tau_constant, double alpha, double v0_norm, double h) {
  if (!(v0_norm > 1.0)) {
    throw Error(ErrorKind::Domain, fmt::format("||v0|| = {} must exceed 1", v0_norm));
  }
  const double h_branch = h > 0.0 ? 2.0 * std::abs(std::log(h)) : INFINITY;
  return tau_constant * alpha * std::min(std::log(v0_norm), h_branch);
}

double compute_tau_alpha(const ExperimentConfig& config, double v0_norm) {
  return compute_tau_alpha(config.tau_constant, config.alpha, v0_norm, config.potential.h);
}

WaveField project_skew_orthogonal(const WaveField& w, const std::vector<TangentFrame>& frames) {
  std::vector<const WaveField*> basis;
  for (const auto& f : frames) {
    for (const auto& x : f.vectors) basis.push_back(&x);
  }
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index l = 0; l < k; ++l) {
    rhs(l) = symplectic(w, *basis[l]);
    for (Eigen::Index m = 0; m < k; ++m) gram(l, m) = inner(*basis[l], *basis[m]);
  }
  const Eigen::VectorXd c = gram.colPivHouseholderQr().solve(rhs);
  WaveField out = w;
  for (Eigen::Index m = 0; m < k; ++m) {
    const auto& x = basis[m]->samples;
    for (std::size_t j = 0; j < out.size(); ++j) out.samples[j] -= c(m) * cplx{0.0, 1.0} * x[j];
  }
  return out;
}

WaveField seeded_fluctuation(const Grid& grid, const std::vector<TangentFrame>& frames,
                             double norm, std::uint64_t seed) {
  if (norm == 0.0) return WaveField::zeros(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const std::size_t n = grid.points;
  const std::size_t band = n / 8;
  std::vector<cplx> spec(n, cplx{0.0, 0.0});
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t index = q <= n / 2 ? q : n - q;
    if (index <= band) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      spec[q] = {re, im};
    }
  }
  WaveField w(grid, Spectral::for_grid(grid)->inverse(spec));
  w = project_skew_orthogonal(w, frames);
  const double current = l2_norm(w);
  if (!(current > 0.0)) throw Error(ErrorKind::Domain, "seeded fluctuation vanished after projection");
  w *= norm / current;
  return w;
}

WaveField build_initial(const ExperimentConfig& config, ProfileCache& profiles) {
  config.validate();
  std::vector<TangentFrame> frames;
  WaveField phi = WaveField::zeros(config.grid);
  for (const auto& s : config.initial_solitons()) {
    frames.push_back(tangent_frame(*profiles.get(s.mu), s));
    phi += frames.back().soliton;
  }
  const double norm = config.effective_fluctuation_norm();
  if (norm > 0.0) phi += seeded_fluctuation(config.grid, frames, norm, config.seed);
  return phi;
}

namespace {

double wrap_angle(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  return x - two_pi * std::round(x / two_pi);
}

double window_end_of(const ExperimentConfig& c, RunRecord& r) {
  r.tau_alpha = std::numeric_limits<double>::quiet_NaN();
  switch (c.scenario) {
    case Scenario::Collision:
      r.tau_alpha = compute_tau_alpha(c, r.v0_norm);
      return r.tau_alpha;
    case Scenario::Escape: return std::pow(r.v0_norm, c.epsilon);
    case Scenario::Separated: return std::pow(r.separation, c.epsilon);
    case Scenario::Single: return c.horizon;
  }
  return c.horizon;
}

std::vector<double> masses(const std::vector<SolitonParams>& s, ProfileCache& profiles) {
  std::vector<double> out;
  for (const auto& p : s) out.push_back(profiles.get(p.mu)->profile->mass);
  return out;
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunRecord rec;
  rec.config_hash = config_hash(config);
  rec.scenario = config.scenario;
  rec.v0_norm = config.v0_norm();
  rec.separation = config.separation();
  rec.window_end = window_end_of(config, rec);
  rec.end_time = std::max(rec.window_end, config.horizon);

  DecompositionOptions dopts;
  dopts.mu_min = config.mu_min;
  dopts.mu_max = config.mu_max;
  ProfileCache profiles(config.nonlinearity, config.grid);
  const auto initial = config.initial_solitons();
  const std::string shash = spec_hash(config.nonlinearity, config.grid);

  EffectiveState eff{initial, 0.0};
  Tracker tracker(profiles, initial, config.potential, dopts);
  double n0 = 0.0;
  std::size_t frame_index = 0;

  auto observe = [&](const WaveField& psi, std::size_t) {
    if (!rec.frames.empty() && psi.time <= rec.frames.back().t) return;
    const auto& fit = tracker.next(psi);
    // Advance the effective flow to the frame time.
    const double span = psi.time - eff.t;
    if (span > 0.0) {
      const double h = span / config.effective_substeps;
      const double target = psi.time;
      for (int k = 0; k < config.effective_substeps; ++k) eff = rk4_step(eff, config.potential, h);
      eff.t = target;
    }
    FrameRecord fr;
    fr.t = psi.time;
    fr.tracked = fit.solitons;
    fr.effective = eff.solitons;
    fr.w_l2 = fit.w_l2;
    fr.residual = fit.residual_norm;
    fr.iterations = fit.iterations;
    fr.charge = charge(psi);
    fr.energy = energy(psi, config.potential, config.nonlinearity, psi.time);
    const double norm2 = 2.0 * fr.charge;
    double rest = norm2 - fit.w_l2 * fit.w_l2;
    for (const double m : masses(fit.solitons, profiles)) rest -= 2.0 * m;
    if (fit.solitons.size() == 2) {
      const auto e1 = synthesize(*profiles.get(fit.solitons[0].mu), fit.solitons[0]);
      const auto e2 = synthesize(*profiles.get(fit.solitons[1].mu), fit.solitons[1]);
      rest -= 2.0 * inner(e1, e2);
    }
    fr.charge_identity = norm2 > 0.0 ? std::abs(rest) / norm2 : 0.0;
    if (rec.frames.empty()) n0 = fr.charge;

    rec.max_charge_drift = std::max(rec.max_charge_drift, std::abs(fr.charge - n0) / n0);
    rec.max_charge_identity = std::max(rec.max_charge_identity, fr.charge_identity);
    if (fr.t <= rec.window_end * (1.0 + 1e-12)) {
      rec.sup_w = std::max(rec.sup_w, fr.w_l2);
      rec.w_at_window_end = fr.w_l2;
      for (std::size_t i = 0; i < fr.tracked.size(); ++i) {
        const auto& a = fr.tracked[i];
        const auto& b = fr.effective[i];
        rec.max_deviation[0] = std::max(rec.max_deviation[0], std::abs(a.a - b.a));
        rec.max_deviation[1] = std::max(rec.max_deviation[1], std::abs(a.v - b.v));
        rec.max_deviation[2] = std::max(rec.max_deviation[2], std::abs(wrap_angle(a.gamma - b.gamma)));
        rec.max_deviation[3] = std::max(rec.max_deviation[3], std::abs(a.mu - b.mu));
      }
    }
    if (!config.output_dir.empty() && config.field_checkpoint_stride > 0 &&
        frame_index % config.field_checkpoint_stride == 0) {
      write_checkpoint(std::filesystem::path(config.output_dir) / "checkpoints" /
                           fmt::format("frame_{:06d}.bin", frame_index),
                       psi, shash);
    }
    ++frame_index;
    rec.frames.push_back(std::move(fr));
  };

  try {
    const WaveField phi = build_initial(config, profiles);
    const WaveField at_window =
        evolve(phi, config.potential, config.nonlinearity, rec.window_end, config.solver, observe);
    if (rec.end_time > rec.window_end) {
      evolve(at_window, config.potential, config.nonlinearity, rec.end_time, config.solver,
             observe);
    }
  } catch (const Error& e) {
    rec.status = fmt::format("failed:{}", to_string(e.kind()));
    rec.error = e.what();
  }
  return rec;
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::V0: return "v0";
    case SweepAxis::H: return "h";
    case SweepAxis::D: return "d";
  }
  return "v0";
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "v0") return SweepAxis::V0;
  if (name == "h") return SweepAxis::H;
  if (name == "d") return SweepAxis::D;
  throw Error(ErrorKind::Config, fmt::format("unknown sweep axis '{}'", name));
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  LinearFit fit;
  fit.points = lx.size();
  if (lx.size() < 2) {
    fit.slope = fit.intercept = fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (lx.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  } else {
    fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

ExperimentConfig sweep_point(const ExperimentConfig& base, SweepAxis axis, double value) {
  ExperimentConfig c = base;
  switch (axis) {
    case SweepAxis::V0: {
      if (c.scenario == Scenario::Single) {
        c.soliton1.v = std::copysign(value, base.soliton1.v == 0.0 ? 1.0 : base.soliton1.v);
        break;
      }
      const double s = base.soliton1.v - base.soliton2.v < 0.0 ? -1.0 : 1.0;
      c.soliton1.v = 0.5 * s * value;
      c.soliton2.v = -0.5 * s * value;
      if (c.scenario == Scenario::Collision && base.fluctuation_norm > 0.0) {
        c.fluctuation_norm = base.fluctuation_norm * std::sqrt(base.v0_norm() / value);
      }
      break;
    }
    case SweepAxis::H: {
      if (base.potential.h > 0.0 && value > 0.0) {
        const double scale = base.potential.h / value;
        c.soliton1.a = base.soliton1.a * scale;
        c.soliton2.a = base.soliton2.a * scale;
      }
      c.potential.h = value;
      break;
    }
    case SweepAxis::D: {
      const double mid = 0.5 * (base.soliton1.a + base.soliton2.a);
      const double s = base.soliton1.a <= base.soliton2.a ? 1.0 : -1.0;
      c.soliton1.a = mid - 0.5 * s * value;
      c.soliton2.a = mid + 0.5 * s * value;
      break;
    }
  }
  return c;
}

namespace {

std::string metric_for(const ExperimentConfig& base, SweepAxis axis) {
  if (base.scenario == Scenario::Escape) return "w_at_window_end";
  if (axis == SweepAxis::H || base.scenario == Scenario::Single) return "max_dev_a";
  return "sup_w";
}

double metric_value(const std::string& metric, const RunRecord& r) {
  if (metric == "w_at_window_end") return r.w_at_window_end;
  if (metric == "max_dev_a") return r.max_deviation[0];
  return r.sup_w;
}

}  // namespace

SweepResult run_scaling_sweep(const ExperimentConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int jobs) {
  if (values.size() < 3) {
    throw Error(ErrorKind::Config, fmt::format("a sweep needs >= 3 values, got {}", values.size()));
  }
  SweepResult out;
  out.axis = axis;
  out.metric = metric_for(base, axis);
  out.samples.resize(values.size());
  std::vector<ExperimentConfig> configs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    configs.push_back(sweep_point(base, axis, values[i]));
    configs.back().output_dir.clear();
    configs.back().validate();
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      auto& s = out.samples[i];
      s.value = values[i];
      s.record = run_experiment(configs[i]);
      s.metric = metric_value(out.metric, s.record);
    }
  };
  const int pool = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < pool; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::vector<double> xs, ys;
  for (const auto& s : out.samples) {
    if (!s.record.ok()) {
      out.partial = true;
      continue;
    }
    xs.push_back(s.value);
    ys.push_back(s.metric);
  }
  out.fit = fit_loglog(xs, ys);
  return out;
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::json record_json(const RunRecord& r) {
  return {{"config_hash", r.config_hash},
          {"scenario", scenario_name(r.scenario)},
          {"status", r.status},
          {"error", r.error},
          {"v0_norm", number(r.v0_norm)},
          {"separation", number(r.separation)},
          {"tau_alpha", number(r.tau_alpha)},
          {"window_end", number(r.window_end)},
          {"end_time", number(r.end_time)},
          {"frames", r.frames.size()},
          {"sup_w", number(r.sup_w)},
          {"w_at_window_end", number(r.w_at_window_end)},
          {"max_deviation",
           {{"a", number(r.max_deviation[0])},
            {"v", number(r.max_deviation[1])},
            {"gamma", number(r.max_deviation[2])},
            {"mu", number(r.max_deviation[3])}}},
          {"max_charge_drift", number(r.max_charge_drift)},
          {"max_charge_identity", number(r.max_charge_identity)}};
}

}  // namespace

std::string run_summary(const RunRecord& record, const ExperimentConfig& config) {
  nlohmann::json j = record_json(record);
  j["alpha"] = config.alpha;
  j["tau_constant"] = config.tau_constant;
  j["config"] = nlohmann::json::parse(canonical_json(config));
  return j.dump(2) + "\n";
}

std::string sweep_summary(const SweepResult& sweep, const ExperimentConfig& base) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : sweep.samples) {
    samples.push_back({{"value", s.value}, {"metric", number(s.metric)}, {"run", record_json(s.record)}});
  }
  nlohmann::json j = {{"axis", axis_name(sweep.axis)},
                      {"metric", sweep.metric},
                      {"slope", number(sweep.fit.slope)},
                      {"slope_stderr", number(sweep.fit.slope_stderr)},
                      {"intercept", number(sweep.fit.intercept)},
                      {"fit_points", sweep.fit.points},
                      {"partial", sweep.partial},
                      {"alpha", base.alpha},
                      {"tau_constant", base.tau_constant},
                      {"samples", samples},
                      {"base_config", nlohmann::json::parse(canonical_json(base))},
                      {"base_config_hash", config_hash(base)}};
  return j.dump(2) + "\n";
}

void emit_run(const RunRecord& record, const ExperimentConfig& config,
              const std::filesystem::path& dir) {
  std::vector<SeriesRow> tracked, effective;
  std::ostringstream diag;
  diag << "t,charge,energy,charge_identity\n";
  for (const auto& f : record.frames) {
    tracked.push_back({f.t, f.tracked, f.w_l2, f.residual, f.iterations});
    effective.push_back({f.t, f.effective, 0.0, 0.0, 0});
    diag << format_double(f.t) << ',' << format_double(f.charge) << ','
         << format_double(f.energy) << ',' << format_double(f.charge_identity) << '\n';
  }
  std::ostringstream s1, s2;
  write_series_csv(s1, tracked);
  write_series_csv(s2, effective);
  write_text_file(dir / "series.csv", s1.str());
  write_text_file(dir / "effective.csv", s2.str());
  write_text_file(dir / "diagnostics.csv", diag.str());
  write_text_file(dir / "summary.json", run_summary(record, config));
  write_text_file(dir / "config.ini", format_config(config));
}

void emit_sweep(const SweepResult& sweep, const ExperimentConfig& base,
                const std::filesystem::path& dir) {
  std::ostringstream csv;
  csv << "value,metric,sup_w,w_at_window_end,max_dev_a,status\n";
  for (std::size_t i = 0; i < sweep.samples.size(); ++i) {
    const auto& s = sweep.samples[i];
    csv << format_double(s.value) << ',' << format_double(s.metric) << ','
        << format_double(s.record.sup_w) << ',' << format_double(s.record.w_at_window_end) << ','
        << format_double(s.record.max_deviation[0]) << ',' << s.record.status << '\n';
    emit_run(s.record, sweep_point(base, sweep.axis, s.value),
             dir / fmt::format("point_{:02d}", i));
  }
  write_text_file(dir / "sweep.csv", csv.str());
  write_text_file(dir / "summary.json", sweep_summary(sweep, base));
}

}  // namespace solitonlab
