#pragma once

#include <string>

namespace solitonlab {

/// External potential V_h(x, t) = V(h x, t).
///
/// The spatial profile is one of Zero, Gaussian bump V0 exp(-y^2 / (2 w^2))
/// or Cosine V0 cos(k y). A nonzero modulation frequency Omega multiplies
/// the profile by cos(Omega t). h = 0 freezes the profile at V(0, t).
struct PotentialSpec {
  enum class Base { Zero, GaussianBump, Cosine };

  Base base = Base::Zero;
  double amplitude = 0.0;
  double width = 1.0;
  double wavenumber = 1.0;
  double modulation = 0.0;
  double h = 0.0;

  static PotentialSpec zero() { return {}; }
  static PotentialSpec gaussian_bump(double amplitude, double width, double h);
  static PotentialSpec cosine(double amplitude, double wavenumber, double h);
  PotentialSpec modulated(double omega) const;

  bool is_zero() const { return base == Base::Zero || amplitude == 0.0; }
  bool time_dependent() const { return !is_zero() && modulation != 0.0; }
  void validate() const;
  std::string base_name() const;
  static Base parse_base(const std::string& name);

  bool operator==(const PotentialSpec&) const = default;
};

struct PotentialSample {
  double value = 0.0;
  double gradient = 0.0;
};

/// V_h(x, t) and its spatial gradient h (dV/dy)(h x, t), analytically.
PotentialSample eval_potential(const PotentialSpec& potential, double x, double t);

/// Partial time derivative of V_h at (x, t).
double potential_time_derivative(const PotentialSpec& potential, double x, double t);

}  // namespace solitonlab
