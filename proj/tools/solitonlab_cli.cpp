#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "solitonlab/solitonlab.hpp"

using namespace solitonlab;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> settings;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> checkpoint_stride;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "structured-text experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.settings, "override, section.key=value (repeatable)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "fluctuation seed");
  cmd->add_option("--checkpoint-stride", c.checkpoint_stride, "solver steps between tracked frames");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config_path.empty() ? ExperimentConfig{} : load_config(c.config_path);
  for (const auto& s : c.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, fmt::format("--set expects key=value, got '{}'", s));
    }
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.checkpoint_stride) cfg.solver.checkpoint_stride = *c.checkpoint_stride;
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

fs::path out_dir(const ExperimentConfig& cfg, const char* fallback) {
  return cfg.output_dir.empty() ? fs::path(fallback) : fs::path(cfg.output_dir);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, fmt::format("--values: '{}' is not a number", item));
    }
  }
  return out;
}

void cmd_profile(const Common& common, std::optional<double> mu_opt) {
  const auto cfg = resolve(common);
  const double mu = mu_opt.value_or(cfg.soliton1.mu);
  const auto p = solve_profile(cfg.nonlinearity, mu, cfg.grid);
  const double rate = fitted_tail_rate(p);
  nlohmann::json j = {{"nonlinearity", cfg.nonlinearity.kind_name()},
                      {"mu", mu},
                      {"mass", p.mass},
                      {"mass_slope", p.mass_slope},
                      {"residual", p.residual},
                      {"tail_rate", rate},
                      {"spec_hash", spec_hash(cfg.nonlinearity, cfg.grid)}};
  std::cout << j.dump(2) << "\n";
  if (!common.out.empty()) {
    std::ostringstream csv;
    csv << "x,eta,deta_dx,deta_dmu\n";
    for (std::size_t k = 0; k < p.grid.points; ++k) {
      csv << format_double(p.grid.x(k)) << ',' << format_double(p.samples[k]) << ','
          << format_double(p.deriv_samples[k]) << ',' << format_double(p.dmu_samples[k]) << '\n';
    }
    write_text_file(fs::path(common.out) / "profile.csv", csv.str());
    write_text_file(fs::path(common.out) / "profile.json", j.dump(2) + "\n");
  }
}

void cmd_evolve(const Common& common, const std::string& input, std::optional<double> t1_opt) {
  const auto cfg = resolve(common);
  cfg.validate();
  ProfileCache cache(cfg.nonlinearity, cfg.grid);
  const auto hash = spec_hash(cfg.nonlinearity, cfg.grid);
  WaveField psi = input.empty() ? build_initial(cfg, cache) : read_checkpoint(fs::path(input));
  const double t1 = t1_opt.value_or(cfg.horizon > 0.0 ? cfg.horizon : 1.0);
  const auto dir = out_dir(cfg, "evolve_out");
  fs::create_directories(dir);
  std::ostringstream diag;
  diag << "t,charge,energy\n";
  std::size_t frame = 0;
  EvolveStats stats;
  const auto out = evolve(psi, cfg.potential, cfg.nonlinearity, t1, cfg.solver,
                          [&](const WaveField& f, std::size_t) {
                            diag << format_double(f.time) << ',' << format_double(charge(f)) << ','
                                 << format_double(energy(f, cfg.potential, cfg.nonlinearity, f.time))
                                 << '\n';
                            if (cfg.field_checkpoint_stride > 0 && frame % cfg.field_checkpoint_stride == 0) {
                              write_checkpoint(dir / fmt::format("frame_{:06d}.chk", frame), f, hash);
                            }
                            ++frame;
                          },
                          &stats);
  write_checkpoint(dir / "final.chk", out, hash);
  write_text_file(dir / "diagnostics.csv", diag.str());
  nlohmann::json j = {{"t", out.time},
                      {"steps", stats.steps},
                      {"max_charge_drift", stats.max_charge_drift},
                      {"config_hash", config_hash(cfg)}};
  write_text_file(dir / "summary.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
}

void cmd_decompose(const Common& common, const std::string& input) {
  const auto cfg = resolve(common);
  ProfileCache cache(cfg.nonlinearity, cfg.grid);
  WaveField psi = input.empty() ? build_initial(cfg, cache) : read_checkpoint(fs::path(input));
  DecompositionOptions opts;
  opts.mu_min = cfg.mu_min;
  opts.mu_max = cfg.mu_max;
  // Guesses follow the effective flow up to the field time.
  auto guesses = cfg.initial_solitons();
  if (psi.time > 0.0) guesses = integrate({guesses, 0.0}, cfg.potential, psi.time, 1e-3).back().solitons;
  const auto r = decompose(psi, guesses, cache, opts);
  const auto dir = out_dir(cfg, "decompose_out");
  std::ostringstream series;
  write_track_csv(series, {r});
  write_text_file(dir / "decomposition.csv", series.str());
  write_checkpoint(dir / "fluctuation.chk", r.fluctuation, spec_hash(cfg.nonlinearity, cfg.grid));
  for (std::size_t i = 0; i < r.solitons.size(); ++i) {
    const auto m = omega_matrix_numeric(tangent_frame(*cache.get(r.solitons[i].mu), r.solitons[i]));
    std::ostringstream csv;
    write_matrix_csv(csv, m.entries);
    write_text_file(dir / fmt::format("omega_{}.csv", i + 1), csv.str());
  }
  std::cout << series.str();
}

void cmd_effective(const Common& common, std::optional<double> t1_opt, std::optional<double> dt_opt) {
  const auto cfg = resolve(common);
  const double t1 = t1_opt.value_or(cfg.horizon > 0.0 ? cfg.horizon : 1.0);
  const double dt = dt_opt.value_or(cfg.solver.dt * static_cast<double>(cfg.solver.checkpoint_stride));
  const auto traj = integrate({cfg.initial_solitons(), 0.0}, cfg.potential, t1, dt);
  std::vector<SeriesRow> rows;
  for (const auto& s : traj) rows.push_back({s.t, s.solitons, 0.0, 0.0, 0});
  std::ostringstream csv;
  write_series_csv(csv, rows);
  if (!common.out.empty()) {
    write_text_file(fs::path(common.out) / "effective.csv", csv.str());
  } else {
    std::cout << csv.str();
  }
}

int cmd_run(const Common& common) {
  const auto cfg = resolve(common);
  const auto record = run_experiment(cfg);
  emit_run(record, cfg, out_dir(cfg, "run_out"));
  std::cout << run_summary(record, cfg);
  return record.ok() ? 0 : 3;
}

int cmd_sweep(const Common& common, const std::string& axis, const std::string& values, int jobs) {
  const auto cfg = resolve(common);
  const auto sweep = run_scaling_sweep(cfg, parse_axis(axis), parse_values(values), jobs);
  emit_sweep(sweep, cfg, out_dir(cfg, "sweep_out"));
  std::cout << sweep_summary(sweep, cfg);
  return sweep.partial ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton collision experiments for nonlinear Schroedinger equations"};
  app.require_subcommand(1);
  Common common;

  auto* profile = app.add_subcommand("profile", "solve the ground state profile");
  std::optional<double> mu;
  profile->add_option("--mu", mu, "frequency (default soliton1.mu)");

  auto* evolve_cmd = app.add_subcommand("evolve", "evolve a field and write checkpoints");
  std::string input;
  std::optional<double> t1, dt;
  evolve_cmd->add_option("--input", input, "checkpoint to start from")->check(CLI::ExistingFile);
  evolve_cmd->add_option("--t1", t1, "end time (default experiment.horizon)");

  auto* decompose_cmd = app.add_subcommand("decompose", "fit two solitons plus a fluctuation");
  decompose_cmd->add_option("--input", input, "checkpoint to decompose")->check(CLI::ExistingFile);

  auto* effective = app.add_subcommand("effective", "integrate the effective particle flow");
  effective->add_option("--t1", t1, "end time (default experiment.horizon)");
  effective->add_option("--dt", dt, "RK4 step (default dt * checkpoint stride)");

  auto* run = app.add_subcommand("run", "run one experiment and emit its series");

  auto* sweep = app.add_subcommand("sweep", "scaling sweep over one axis");
  std::string axis = "v0", values;
  int jobs = 1;
  sweep->add_option("--axis", axis, "v0, h or d");
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  for (auto* cmd : {profile, evolve_cmd, decompose_cmd, effective, run, sweep}) add_common(cmd, common);

  CLI11_PARSE(app, argc, argv);
  try {
    if (profile->parsed()) cmd_profile(common, mu);
    if (evolve_cmd->parsed()) cmd_evolve(common, input, t1);
    if (decompose_cmd->parsed()) cmd_decompose(common, input);
    if (effective->parsed()) cmd_effective(common, t1, dt);
    if (run->parsed()) return cmd_run(common);
    if (sweep->parsed()) return cmd_sweep(common, axis, values, jobs);
  } catch (const Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", to_string(e.kind()), e.what());
    return 2;
  }
  return 0;
}
