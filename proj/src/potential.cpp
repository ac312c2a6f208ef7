#include "solitonlab/potential.hpp"

#include <cmath>

#include <fmt/format.h>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

struct Profile {
  double value;
  double derivative;
};

Profile spatial_profile(const PotentialSpec& p, double y) {
  switch (p.base) {
    case PotentialSpec::Base::Zero: return {0.0, 0.0};
    case PotentialSpec::Base::GaussianBump: {
      const double w2 = p.width * p.width;
      const double v = p.amplitude * std::exp(-0.5 * y * y / w2);
      return {v, -y / w2 * v};
    }
    case PotentialSpec::Base::Cosine:
      return {p.amplitude * std::cos(p.wavenumber * y),
              -p.amplitude * p.wavenumber * std::sin(p.wavenumber * y)};
  }
  return {0.0, 0.0};
}

}  // namespace

PotentialSpec PotentialSpec::gaussian_bump(double amplitude, double width, double h) {
  PotentialSpec p;
  p.base = Base::GaussianBump;
  p.amplitude = amplitude;
  p.width = width;
  p.h = h;
  return p;
}

PotentialSpec PotentialSpec::cosine(double amplitude, double wavenumber, double h) {
  PotentialSpec p;
  p.base = Base::Cosine;
  p.amplitude = amplitude;
  p.wavenumber = wavenumber;
  p.h = h;
  return p;
}

PotentialSpec PotentialSpec::modulated(double omega) const {
  PotentialSpec p = *this;
  p.modulation = omega;
  return p;
}

void PotentialSpec::validate() const {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::Domain, fmt::format("adiabatic scale h={} must be >= 0", h));
  }
  if (!std::isfinite(amplitude) || !std::isfinite(modulation)) {
    throw Error(ErrorKind::Domain, "potential amplitude and modulation must be finite");
  }
  if (base == Base::GaussianBump && !(width > 0.0)) {
    throw Error(ErrorKind::Domain, fmt::format("Gaussian width {} must be positive", width));
  }
  if (base == Base::Cosine && !std::isfinite(wavenumber)) {
    throw Error(ErrorKind::Domain, "cosine wavenumber must be finite");
  }
}

std::string PotentialSpec::base_name() const {
  switch (base) {
    case Base::Zero: return "zero";
    case Base::GaussianBump: return "gaussian";
    case Base::Cosine: return "cosine";
  }
  return "zero";
}

PotentialSpec::Base PotentialSpec::parse_base(const std::string& name) {
  if (name == "zero") return Base::Zero;
  if (name == "gaussian") return Base::GaussianBump;
  if (name == "cosine") return Base::Cosine;
  throw Error(ErrorKind::Config, fmt::format("unknown potential base '{}'", name));
}

PotentialSample eval_potential(const PotentialSpec& potential, double x, double t) {
  if (potential.base == PotentialSpec::Base::Zero) return {};
  const auto prof = spatial_profile(potential, potential.h * x);
  const double mod = potential.modulation != 0.0 ? std::cos(potential.modulation * t) : 1.0;
  return {prof.value * mod, potential.h * prof.derivative * mod};
}

double potential_time_derivative(const PotentialSpec& potential, double x, double t) {
  if (potential.base == PotentialSpec::Base::Zero || potential.modulation == 0.0) return 0.0;
  const auto prof = spatial_profile(potential, potential.h * x);
  return -potential.modulation * std::sin(potential.modulation * t) * prof.value;
}

}  // namespace solitonlab
