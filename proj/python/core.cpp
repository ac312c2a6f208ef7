#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "solitonlab/solitonlab.hpp"

namespace py = pybind11;
using namespace solitonlab;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexArray to_array(const WaveField& f) {
  ComplexArray out(static_cast<py::ssize_t>(f.samples.size()));
  std::copy(f.samples.begin(), f.samples.end(), out.mutable_data());
  return out;
}

WaveField from_array(const Grid& grid, const ComplexArray& a, double t) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != grid.points) {
    throw Error(ErrorKind::GridMismatch, "array length does not match the grid");
  }
  return WaveField(grid, std::vector<cplx>(a.data(), a.data() + a.shape(0)), t);
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict params_dict(const SolitonParams& s) {
  py::dict d;
  d["a"] = s.a;
  d["v"] = s.v;
  d["gamma"] = s.gamma;
  d["mu"] = s.mu;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Soliton manifold, split-step solver and modulation fits for 1D NLS";

  py::register_exception<Error>(m, "SolitonlabError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, std::size_t>(), py::arg("length"), py::arg("points"))
      .def_readonly("length", &Grid::length)
      .def_readonly("points", &Grid::points)
      .def_property_readonly("spacing", &Grid::spacing)
      .def("coordinates", [](const Grid& g) { return to_array(g.coordinates()); })
      .def("__repr__", [](const Grid& g) {
        return "Grid(length=" + format_double(g.length) + ", points=" + std::to_string(g.points) + ")";
      });

  py::class_<SolitonParams>(m, "SolitonParams")
      .def(py::init([](double a, double v, double gamma, double mu) { return SolitonParams{a, v, gamma, mu}; }),
           py::arg("a") = 0.0, py::arg("v") = 0.0, py::arg("gamma") = 0.0, py::arg("mu") = 1.0)
      .def_readwrite("a", &SolitonParams::a)
      .def_readwrite("v", &SolitonParams::v)
      .def_readwrite("gamma", &SolitonParams::gamma)
      .def_readwrite("mu", &SolitonParams::mu)
      .def("as_dict", &params_dict)
      .def(py::self == py::self)
      .def("__repr__", [](const SolitonParams& s) {
        return "SolitonParams(a=" + format_double(s.a) + ", v=" + format_double(s.v) +
               ", gamma=" + format_double(s.gamma) + ", mu=" + format_double(s.mu) + ")";
      });

  py::class_<NonlinearitySpec>(m, "Nonlinearity")
      .def_static("cubic", &NonlinearitySpec::cubic)
      .def_static("power_law", &NonlinearitySpec::power_law, py::arg("s"), py::arg("theta") = 1e6)
      .def_static("hartree", &NonlinearitySpec::hartree_kernel, py::arg("lambda_") = 1.0, py::arg("g0") = 1.0)
      .def_property_readonly("kind", &NonlinearitySpec::kind_name);

  py::class_<PotentialSpec>(m, "Potential")
      .def_static("zero", &PotentialSpec::zero)
      .def_static("gaussian_bump", &PotentialSpec::gaussian_bump, py::arg("amplitude"), py::arg("width"),
                  py::arg("h"))
      .def_static("cosine", &PotentialSpec::cosine, py::arg("amplitude"), py::arg("wavenumber"), py::arg("h"))
      .def("modulated", &PotentialSpec::modulated, py::arg("omega"))
      .def("__call__", [](const PotentialSpec& p, double x, double t) { return eval_potential(p, x, t).value; },
           py::arg("x"), py::arg("t") = 0.0);

  py::class_<SolitonProfile>(m, "Profile")
      .def_readonly("mu", &SolitonProfile::mu)
      .def_readonly("mass", &SolitonProfile::mass)
      .def_readonly("mass_slope", &SolitonProfile::mass_slope)
      .def_readonly("residual", &SolitonProfile::residual)
      .def_property_readonly("samples", [](const SolitonProfile& p) { return to_array(p.samples); })
      .def_property_readonly("dmu_samples", [](const SolitonProfile& p) { return to_array(p.dmu_samples); });

  m.def("solve_profile",
        [](const NonlinearitySpec& nl, double mu, const Grid& grid) { return solve_profile(nl, mu, grid); },
        py::arg("nonlinearity"), py::arg("mu"), py::arg("grid"), "Ground state eta_mu with m(mu) and m'(mu).");

  m.def("synthesize",
        [](const NonlinearitySpec& nl, const Grid& grid, const std::vector<SolitonParams>& solitons) {
          ProfileCache cache(nl, grid);
          WaveField sum = WaveField::zeros(grid);
          for (const auto& s : solitons) sum += synthesize(*cache.get(s.mu), s);
          return to_array(sum);
        },
        py::arg("nonlinearity"), py::arg("grid"), py::arg("solitons"), "Sum of placed solitons on the grid.");

  m.def("evolve",
        [](const ComplexArray& psi0, const Grid& grid, const PotentialSpec& V, const NonlinearitySpec& nl,
           double t1, double dt, double t0) {
          SolverConfig cfg;
          cfg.dt = dt;
          WaveField out;
          {
            py::gil_scoped_release release;
            out = evolve(from_array(grid, psi0, t0), V, nl, t1, cfg);
          }
          return to_array(out);
        },
        py::arg("psi0"), py::arg("grid"), py::arg("potential"), py::arg("nonlinearity"), py::arg("t1"),
        py::arg("dt") = 1e-3, py::arg("t0") = 0.0, "Strang split-step evolution from t0 to t1.");

  m.def("charge", [](const ComplexArray& psi, const Grid& grid) { return charge(from_array(grid, psi, 0.0)); },
        py::arg("psi"), py::arg("grid"));
  m.def("energy",
        [](const ComplexArray& psi, const Grid& grid, const PotentialSpec& V, const NonlinearitySpec& nl,
           double t) { return energy(from_array(grid, psi, t), V, nl, t); },
        py::arg("psi"), py::arg("grid"), py::arg("potential"), py::arg("nonlinearity"), py::arg("t") = 0.0);

  m.def("decompose",
        [](const ComplexArray& psi, const Grid& grid, const NonlinearitySpec& nl,
           const std::vector<SolitonParams>& guesses) {
          ProfileCache cache(nl, grid);
          const auto r = decompose(from_array(grid, psi, 0.0), guesses, cache);
          py::dict d;
          d["solitons"] = r.solitons;
          d["fluctuation"] = to_array(r.fluctuation);
          d["w_l2"] = r.w_l2;
          d["residual"] = r.residual_norm;
          d["iterations"] = r.iterations;
          return d;
        },
        py::arg("psi"), py::arg("grid"), py::arg("nonlinearity"), py::arg("guesses"),
        "Fit psi = sum eta_sigma + w with w skew-orthogonal to every tangent frame.");

  m.def("omega_matrix",
        [](const NonlinearitySpec& nl, const Grid& grid, const SolitonParams& s, bool closed) {
          ProfileCache cache(nl, grid);
          const auto p = cache.get(s.mu);
          if (closed) return omega_matrix_closed(s, p->profile->mass, p->profile->mass_slope).entries;
          return omega_matrix_numeric(tangent_frame(*p, s)).entries;
        },
        py::arg("nonlinearity"), py::arg("grid"), py::arg("sigma"), py::arg("closed") = false);

  m.def("effective_trajectory",
        [](const std::vector<SolitonParams>& solitons, const PotentialSpec& V, double t1, double dt) {
          py::list out;
          for (const auto& s : integrate({solitons, 0.0}, V, t1, dt)) out.append(py::make_tuple(s.t, s.solitons));
          return out;
        },
        py::arg("solitons"), py::arg("potential"), py::arg("t1"), py::arg("dt") = 1e-3,
        "RK4 trajectory of the effective particle flow as (t, [SolitonParams]) pairs.");

  m.def("compute_tau_alpha",
        py::overload_cast<double, double, double, double>(&compute_tau_alpha), py::arg("tau_constant"),
        py::arg("alpha"), py::arg("v0_norm"), py::arg("h") = 0.0);

  m.def("default_config", [] { return format_config(ExperimentConfig{}); },
        "Default experiment configuration as structured text.");

  m.def("run",
        [](const std::string& config_text, const std::vector<std::pair<std::string, std::string>>& settings,
           const std::string& out) {
          auto cfg = parse_config(config_text);
          apply_settings(cfg, settings);
          RunRecord record;
          {
            py::gil_scoped_release release;
            record = run_experiment(cfg);
          }
          if (!out.empty()) emit_run(record, cfg, out);
          return run_summary(record, cfg);
        },
        py::arg("config") = std::string(), py::arg("settings") = std::vector<std::pair<std::string, std::string>>{},
        py::arg("out") = std::string(), "Runs one experiment; returns its JSON summary.");

  m.def("sweep",
        [](const std::string& config_text, const std::vector<std::pair<std::string, std::string>>& settings,
           const std::string& axis, const std::vector<double>& values, int jobs, const std::string& out) {
          auto cfg = parse_config(config_text);
          apply_settings(cfg, settings);
          SweepResult result;
          {
            py::gil_scoped_release release;
            result = run_scaling_sweep(cfg, parse_axis(axis), values, jobs);
          }
          if (!out.empty()) emit_sweep(result, cfg, out);
          return sweep_summary(result, cfg);
        },
        py::arg("config"), py::arg("settings"), py::arg("axis"), py::arg("values"), py::arg("jobs") = 1,
        py::arg("out") = std::string(), "Scaling sweep; returns its JSON summary.");
}
