#pragma once

#include <span>
#include <string>
#include <vector>

#include "solitonlab/grid.hpp"

namespace solitonlab {

/// Local power law |psi|^s psi chi_{theta,s}(|psi|).
struct PowerLaw {
  double s = 2.0;
  double theta = 1e6;
};

/// Hartree term (W * |psi|^2) psi with W(x) = g0 exp(-lambda |x|).
struct Hartree {
  double lambda = 1.0;
  double g0 = 1.0;
};

struct NonlinearitySpec {
  enum class Kind { Power, Hartree, Sum };

  Kind kind = Kind::Power;
  PowerLaw power;
  Hartree hartree;

  static NonlinearitySpec cubic() { return {}; }
  static NonlinearitySpec power_law(double s, double theta = 1e6);
  static NonlinearitySpec hartree_kernel(double lambda = 1.0, double g0 = 1.0);
  static NonlinearitySpec sum(PowerLaw p, Hartree h);

  bool has_local() const { return kind != Kind::Hartree; }
  bool has_nonlocal() const { return kind != Kind::Power; }
  /// Throws Error(Domain) if s is outside (0, 4) or lambda, g0, theta are not positive.
  void validate() const;
  /// "power", "hartree" or "sum".
  std::string kind_name() const;
  static Kind parse_kind(const std::string& name);

  bool operator==(const NonlinearitySpec&) const = default;
};

/// Regularization chi_{theta,s}(y) with its y-derivative.
double cutoff(const PowerLaw& p, double y);
double cutoff_derivative(const PowerLaw& p, double y);

/// g(y) = y^s chi(y), so the local term is f(psi) = g(|psi|) psi.
double local_gain(const PowerLaw& p, double y);
double local_gain_derivative(const PowerLaw& p, double y);
/// G(y) = int_0^y g(t) t dt, the local potential density.
double local_potential_density(const PowerLaw& p, double y);

/// Real multiplier m(x) with f(psi) = m psi (the nonlinear self-potential).
std::vector<double> nonlinear_potential(const NonlinearitySpec& spec, const Grid& grid,
                                        std::span<const cplx> psi);

/// f(psi) pointwise (local) or by periodic convolution (Hartree).
WaveField apply_f(const NonlinearitySpec& spec, const WaveField& psi);

/// Real-linear derivative f'(eta) w at a real base point eta.
WaveField apply_fprime(const NonlinearitySpec& spec, const WaveField& eta, const WaveField& w);
std::vector<cplx> apply_fprime(const NonlinearitySpec& spec, const Grid& grid,
                               std::span<const double> eta, std::span<const cplx> w);

/// F(psi) with F' = f.
double potential_F(const NonlinearitySpec& spec, const WaveField& psi);

/// DFT of the periodized Hartree kernel sampled on the grid, times dx.
std::span<const cplx> hartree_kernel_dft(const Hartree& h, const Grid& grid);

/// Periodized kernel sum_m g0 exp(-lambda |x + m L|) for |x| <= L/2.
double periodized_hartree_kernel(const Hartree& h, double length, double x);

}  // namespace solitonlab
