#include "solitonlab/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "solitonlab/error.hpp"
#include "solitonlab/io.hpp"

namespace solitonlab {

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Config, fmt::format("{}: '{}' is not a number", key, v));
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const auto x = std::stoull(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Config, fmt::format("{}: '{}' is not a non-negative integer", key, v));
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real_field(std::string key, double ExperimentConfig::*member) {
  return {std::move(key),
          [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_double(k, v);
          },
          [member](const ExperimentConfig& c) { return format_double(c.*member); }};
}

template <class Access>
Field real_via(std::string key, Access access) {
  return {std::move(key),
          [access](ExperimentConfig& c, const std::string& k, const std::string& v) {
            access(c) = to_double(k, v);
          },
          [access](const ExperimentConfig& c) {
            return format_double(access(const_cast<ExperimentConfig&>(c)));
          }};
}

void soliton_fields(std::vector<Field>& out, const std::string& section,
                    SolitonParams ExperimentConfig::*member) {
  out.push_back(real_via(section + ".a", [member](ExperimentConfig& c) -> double& {
    return (c.*member).a;
  }));
  out.push_back(real_via(section + ".v", [member](ExperimentConfig& c) -> double& {
    return (c.*member).v;
  }));
  out.push_back(real_via(section + ".gamma", [member](ExperimentConfig& c) -> double& {
    return (c.*member).gamma;
  }));
  out.push_back(real_via(section + ".mu", [member](ExperimentConfig& c) -> double& {
    return (c.*member).mu;
  }));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"nonlinearity.kind",
                 [](ExperimentConfig& c, const std::string&, const std::string& v) {
                   c.nonlinearity.kind = NonlinearitySpec::parse_kind(v);
                 },
                 [](const ExperimentConfig& c) { return c.nonlinearity.kind_name(); }});
    f.push_back(real_via("nonlinearity.s",
                         [](ExperimentConfig& c) -> double& { return c.nonlinearity.power.s; }));
    f.push_back(real_via("nonlinearity.theta", [](ExperimentConfig& c) -> double& {
      return c.nonlinearity.power.theta;
    }));
    f.push_back(real_via("nonlinearity.lambda", [](ExperimentConfig& c) -> double& {
      return c.nonlinearity.hartree.lambda;
    }));
    f.push_back(real_via("nonlinearity.g0", [](ExperimentConfig& c) -> double& {
      return c.nonlinearity.hartree.g0;
    }));

    f.push_back({"potential.base",
                 [](ExperimentConfig& c, const std::string&, const std::string& v) {
                   c.potential.base = PotentialSpec::parse_base(v);
                 },
                 [](const ExperimentConfig& c) { return c.potential.base_name(); }});
    f.push_back(real_via("potential.amplitude",
                         [](ExperimentConfig& c) -> double& { return c.potential.amplitude; }));
    f.push_back(real_via("potential.width",
                         [](ExperimentConfig& c) -> double& { return c.potential.width; }));
    f.push_back(real_via("potential.wavenumber",
                         [](ExperimentConfig& c) -> double& { return c.potential.wavenumber; }));
    f.push_back(real_via("potential.modulation",
                         [](ExperimentConfig& c) -> double& { return c.potential.modulation; }));
    f.push_back(real_via("potential.h", [](ExperimentConfig& c) -> double& { return c.potential.h; }));

    f.push_back({"grid.length",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.grid = Grid(to_double(k, v), c.grid.points);
                 },
                 [](const ExperimentConfig& c) { return format_double(c.grid.length); }});
    f.push_back({"grid.points",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.grid = Grid(c.grid.length, static_cast<std::size_t>(to_uint(k, v)));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.grid.points); }});

    f.push_back(real_via("solver.dt", [](ExperimentConfig& c) -> double& { return c.solver.dt; }));
    f.push_back({"solver.checkpoint_stride",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.solver.checkpoint_stride = static_cast<std::size_t>(to_uint(k, v));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.solver.checkpoint_stride); }});
    f.push_back({"solver.max_steps",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.solver.max_steps = static_cast<std::size_t>(to_uint(k, v));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.solver.max_steps); }});

    soliton_fields(f, "soliton1", &ExperimentConfig::soliton1);
    soliton_fields(f, "soliton2", &ExperimentConfig::soliton2);

    f.push_back(real_field("fluctuation.norm", &ExperimentConfig::fluctuation_norm));
    f.push_back(real_field("fluctuation.constant", &ExperimentConfig::fluctuation_constant));
    f.push_back(real_field("fluctuation.decay", &ExperimentConfig::fluctuation_decay));

    f.push_back({"experiment.scenario",
                 [](ExperimentConfig& c, const std::string&, const std::string& v) {
                   c.scenario = parse_scenario(v);
                 },
                 [](const ExperimentConfig& c) { return scenario_name(c.scenario); }});
    f.push_back(real_field("experiment.alpha", &ExperimentConfig::alpha));
    f.push_back(real_field("experiment.tau_constant", &ExperimentConfig::tau_constant));
    f.push_back(real_field("experiment.horizon", &ExperimentConfig::horizon));
    f.push_back(real_field("experiment.epsilon", &ExperimentConfig::epsilon));
    f.push_back(real_field("experiment.mu_min", &ExperimentConfig::mu_min));
    f.push_back(real_field("experiment.mu_max", &ExperimentConfig::mu_max));
    f.push_back({"experiment.seed",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.seed = to_uint(k, v);
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
    f.push_back({"experiment.output",
                 [](ExperimentConfig& c, const std::string&, const std::string& v) {
                   c.output_dir = v;
                 },
                 [](const ExperimentConfig& c) { return c.output_dir; }});
    f.push_back({"experiment.field_checkpoint_stride",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.field_checkpoint_stride = static_cast<std::size_t>(to_uint(k, v));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.field_checkpoint_stride); }});
    f.push_back({"experiment.effective_substeps",
                 [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.effective_substeps = static_cast<int>(to_uint(k, v));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.effective_substeps); }});
    return f;
  }();
  return table;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Collision: return "collision";
    case Scenario::Escape: return "escape";
    case Scenario::Separated: return "separated";
    case Scenario::Single: return "single";
  }
  return "collision";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "collision") return Scenario::Collision;
  if (name == "escape") return Scenario::Escape;
  if (name == "separated") return Scenario::Separated;
  if (name == "single") return Scenario::Single;
  throw Error(ErrorKind::Config, fmt::format("unknown scenario '{}'", name));
}

std::vector<SolitonParams> ExperimentConfig::initial_solitons() const {
  if (scenario == Scenario::Single) return {soliton1};
  return {soliton1, soliton2};
}

double ExperimentConfig::v0_norm() const {
  if (scenario == Scenario::Single) return std::abs(soliton1.v);
  return std::abs(soliton1.v - soliton2.v);
}

double ExperimentConfig::separation() const {
  if (scenario == Scenario::Single) return 0.0;
  return std::abs(soliton1.a - soliton2.a);
}

double ExperimentConfig::effective_fluctuation_norm() const {
  switch (scenario) {
    case Scenario::Separated: return fluctuation_norm * std::exp(-fluctuation_decay * separation());
    case Scenario::Escape: return fluctuation_norm * std::exp(-fluctuation_decay * v0_norm());
    default: return fluctuation_norm;
  }
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorKind::Config, fmt::format("{}: {}", key, why));
  };
  try {
    nonlinearity.validate();
  } catch (const Error& e) {
    fail("nonlinearity", e.what());
  }
  try {
    potential.validate();
  } catch (const Error& e) {
    fail("potential", e.what());
  }
  solver.validate();
  if (!(mu_min > 0.0 && mu_min < mu_max)) fail("experiment.mu_min", "need 0 < mu_min < mu_max");
  int index = 1;
  for (const auto& s : initial_solitons()) {
    const std::string sec = fmt::format("soliton{}", index++);
    if (!s.all_finite()) fail(sec, "parameters must be finite");
    if (s.mu < mu_min || s.mu > mu_max) {
      fail(sec + ".mu", fmt::format("{} outside I0 = [{}, {}]", s.mu, mu_min, mu_max));
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) fail("experiment.alpha", "must lie in (0, 1)");
  if (!(tau_constant > 0.0)) fail("experiment.tau_constant", "must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("experiment.epsilon", "must lie in (0, 1)");
  if (!(horizon >= 0.0)) fail("experiment.horizon", "must be >= 0");
  if (effective_substeps < 1) fail("experiment.effective_substeps", "must be >= 1");
  if (!(fluctuation_norm >= 0.0)) fail("fluctuation.norm", "must be >= 0");
  if (!(fluctuation_decay >= 0.0)) fail("fluctuation.decay", "must be >= 0");
  switch (scenario) {
    case Scenario::Collision: {
      if (!(v0_norm() > 1.0)) fail("soliton1.v", "collision needs relative speed > 1");
      const double budget = fluctuation_constant / v0_norm();
      const double w = effective_fluctuation_norm();
      if (w > 0.0 && !(w * w < budget)) {
        fail("fluctuation.norm",
             fmt::format("||w||^2 = {} violates the smallness bound {} / ||v0||", w * w,
                         fluctuation_constant));
      }
      break;
    }
    case Scenario::Escape:
      if ((soliton1.a - soliton2.a) * (soliton1.v - soliton2.v) < 0.0) {
        fail("soliton1", "escape requires (a1 - a2)(v1 - v2) >= 0");
      }
      if (!(v0_norm() > 1.0)) fail("soliton1.v", "escape needs relative speed > 1");
      break;
    case Scenario::Separated:
      if (!(separation() > 1.0)) fail("soliton1.a", "separated scenario needs |a1 - a2| > 1");
      break;
    case Scenario::Single:
      if (!(horizon > 0.0)) fail("experiment.horizon", "single scenario needs a positive horizon");
      break;
  }
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(config, key, value);
      return;
    }
  }
  throw Error(ErrorKind::Config, fmt::format("unknown config key '{}'", key));
}

void apply_settings(ExperimentConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& settings) {
  for (const auto& [k, v] : settings) apply_setting(config, k, v);
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config, fmt::format("config parse error: {}", e.what()));
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw Error(ErrorKind::Config, fmt::format("key '{}' must live inside a section", section));
    }
    for (const auto& [key, node] : body) {
      apply_setting(c, section + "." + key, node.get_value<std::string>());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open config {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const auto sec = f.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += '\n';
      out += fmt::format("[{}]\n", sec);
      section = sec;
    }
    out += fmt::format("{} = {}\n", f.key.substr(dot + 1), f.get(config));
  }
  return out;
}

std::string canonical_json(const ExperimentConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fields()) {
    if (f.key == "experiment.output") continue;
    j[f.key] = f.get(config);
  }
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  return fmt::format("{:016x}", fnv1a(canonical_json(config)));
}

std::string spec_hash(const NonlinearitySpec& spec, const Grid& grid) {
  ExperimentConfig c;
  c.nonlinearity = spec;
  c.grid = grid;
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fields()) {
    if (f.key.rfind("nonlinearity.", 0) == 0 || f.key.rfind("grid.", 0) == 0) j[f.key] = f.get(c);
  }
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

}  // namespace solitonlab
