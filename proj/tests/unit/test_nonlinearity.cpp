#include <doctest.h>

#include <cmath>
#include <numbers>

#include "solitonlab/error.hpp"
#include "solitonlab/field.hpp"
#include "solitonlab/nonlinearity.hpp"
#include "support.hpp"

using namespace solitonlab;
using testing::cubic_field;
using testing::random_smooth;

namespace {

const Grid kGrid(64.0, 1024);

double dF(const NonlinearitySpec& spec, const WaveField& psi, const WaveField& w, double eps) {
  return (potential_F(spec, psi + cplx{eps, 0.0} * w) - potential_F(spec, psi - cplx{eps, 0.0} * w)) /
         (2.0 * eps);
}

std::vector<NonlinearitySpec> all_kinds() {
  return {NonlinearitySpec::cubic(), NonlinearitySpec::power_law(1.3),
          NonlinearitySpec::hartree_kernel(1.0, 1.0),
          NonlinearitySpec::sum(PowerLaw{2.0, 1e6}, Hartree{1.0, 0.5})};
}

}  // namespace

TEST_SUITE("nonlinearity") {

TEST_CASE("cubic f on a constant field below the cutoff") {
  const Grid g(1.0, 16);
  WaveField psi(g, std::vector<cplx>(16, cplx{2.0, 0.0}));
  const auto f = apply_f(NonlinearitySpec::power_law(2.0, 1e6), psi);
  for (const auto& z : f.samples) CHECK(z == cplx{8.0, 0.0});
}

TEST_CASE("f vanishes at zero for every variant") {
  for (const auto& spec : all_kinds()) {
    const auto f = apply_f(spec, WaveField::zeros(kGrid));
    CHECK(f.max_abs() == 0.0);
    CHECK(potential_F(spec, WaveField::zeros(kGrid)) == 0.0);
  }
}

TEST_CASE("Hartree term matches a direct real-space convolution") {
  const Grid g(128.0, 2048);
  const auto spec = NonlinearitySpec::hartree_kernel(1.0, 1.0);
  const auto eta = cubic_field(g, 1.0);
  const auto f = apply_f(spec, eta);
  const double dx = g.spacing();
  double worst = 0.0;
  for (std::size_t j = 0; j < g.points; ++j) {
    double conv = 0.0;
    for (std::size_t l = 0; l < g.points; ++l) {
      const double d = g.x(j) - g.x(l);
      double w = 0.0;
      for (int m = -3; m <= 3; ++m) w += std::exp(-std::abs(d + m * g.length));
      conv += w * std::norm(eta.samples[l]) * dx;
    }
    worst = std::max(worst, std::abs(f.samples[j] - conv * eta.samples[j]));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("f' on a purely imaginary direction has no real coupling") {
  const auto eta = cubic_field(kGrid, 1.0);
  for (const auto& spec : {NonlinearitySpec::cubic(), NonlinearitySpec::power_law(1.5)}) {
    const auto u = cubic_field(kGrid, 2.0);
    const auto out = apply_fprime(spec, eta, cplx{0.0, 1.0} * u);
    for (std::size_t j = 0; j < kGrid.points; ++j) {
      const double y = eta.samples[j].real();
      const double h = local_gain(spec.power, y);
      CHECK(std::abs(out.samples[j] - cplx{0.0, h * u.samples[j].real()}) <= 1e-14);
    }
  }
}

TEST_CASE("cubic f'(eta) eta = 3 eta^3") {
  const auto eta = cubic_field(kGrid, 1.0);
  const auto out = apply_fprime(NonlinearitySpec::cubic(), eta, eta);
  for (std::size_t j = 0; j < kGrid.points; ++j) {
    const double y = eta.samples[j].real();
    CHECK(std::abs(out.samples[j] - 3.0 * y * y * y) <= 1e-13);
  }
}

TEST_CASE("f' agrees with difference quotients at first order") {
  const auto eta = cubic_field(kGrid, 1.0);
  const auto w = random_smooth(kGrid, 11);
  for (const auto& spec : all_kinds()) {
    const auto lin = apply_fprime(spec, eta, w);
    const auto f0 = apply_f(spec, eta);
    std::vector<double> err;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      auto q = apply_f(spec, eta + cplx{eps, 0.0} * w) - f0;
      q *= 1.0 / eps;
      err.push_back(l2_norm(q - lin));
    }
    const double slope1 = std::log10(err[0] / err[1]);
    const double slope2 = std::log10(err[1] / err[2]);
    CHECK(slope1 == doctest::Approx(1.0).epsilon(0.1));
    CHECK(slope2 == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("f' rejects a complex base point") {
  auto eta = cubic_field(kGrid, 1.0);
  eta *= cplx{0.0, 1.0};
  CHECK_THROWS_AS(apply_fprime(NonlinearitySpec::cubic(), eta, eta), Error);
}

TEST_CASE("apply_f rejects non-finite samples") {
  auto psi = cubic_field(kGrid, 1.0);
  psi.samples[3] = cplx{NAN, 0.0};
  try {
    apply_f(NonlinearitySpec::cubic(), psi);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("directional derivative of F is <f, w>") {
  const auto eta = cubic_field(kGrid, 1.0);
  const auto w = random_smooth(kGrid, 5);
  for (const auto& spec : all_kinds()) {
    const double expect = inner(apply_f(spec, eta), w);
    CHECK(std::abs(dF(spec, eta, w, 1e-4) - expect) <= 1e-8);
  }
}

TEST_CASE("cubic F is a quarter of the quartic integral") {
  const auto psi = random_smooth(kGrid, 3);
  double q = 0.0;
  for (const auto& z : psi.samples) q += std::norm(z) * std::norm(z);
  CHECK(potential_F(NonlinearitySpec::cubic(), psi) == doctest::Approx(0.25 * q * kGrid.spacing()));
}

TEST_CASE("F is invariant under phase, grid translation and commensurate boosts") {
  const auto psi = random_smooth(kGrid, 9);
  for (const auto& spec : all_kinds()) {
    const double f0 = potential_F(spec, psi);
    const double tol = 1e-10 * (1.0 + std::abs(f0));
    CHECK(std::abs(potential_F(spec, std::polar(1.0, 0.83) * psi) - f0) <= tol);
    const double shift = 37 * kGrid.spacing();
    CHECK(std::abs(potential_F(spec, apply_transform(shift, 0.0, 0.0, psi)) - f0) <= tol);
    const double v = 2.0 * (2.0 * std::numbers::pi / kGrid.length) * 3.0;
    CHECK(std::abs(potential_F(spec, apply_transform(0.0, v, 0.0, psi)) - f0) <= tol);
  }
}

TEST_CASE("f commutes with complex conjugation") {
  const auto psi = random_smooth(kGrid, 21);
  WaveField conj_psi = psi;
  for (auto& z : conj_psi.samples) z = std::conj(z);
  for (const auto& spec : all_kinds()) {
    auto a = apply_f(spec, psi);
    for (auto& z : a.samples) z = std::conj(z);
    const auto b = apply_f(spec, conj_psi);
    CHECK(l2_norm(a - b) <= 1e-12 * l2_norm(a));
  }
}

TEST_CASE("second-order remainder of f is quadratic in w") {
  const Grid g(128.0, 2048);
  const auto u = testing::cubic_soliton(g, -15.0, 2.0, 0.0, 1.0) + testing::cubic_soliton(g, 15.0, -2.0, 0.4, 1.5);
  const auto test_fn = random_smooth(g, 77);
  const auto spec = NonlinearitySpec::cubic();
  // f'(u) at a complex point: derivative of the real-linear map by symmetric differences.
  auto remainder_ratio = [&](const WaveField& w) {
    const double e = 1e-6;
    auto lin = apply_f(spec, u + cplx{e, 0.0} * w) - apply_f(spec, u - cplx{e, 0.0} * w);
    lin *= 0.5 / e;
    const auto r = apply_f(spec, u + w) - apply_f(spec, u) - lin;
    const double nw = l2_norm(w);
    return std::abs(inner(test_fn, r)) / (nw * nw);
  };
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto w = random_smooth(g, 100 + seed);
    w *= 1e-2 / l2_norm(w);
    ratios.push_back(remainder_ratio(w));
    w *= 0.5;
    const double halved = remainder_ratio(w);
    CHECK(halved == doctest::Approx(ratios.back()).epsilon(0.2));
  }
}

TEST_CASE("validation rejects out-of-range parameters") {
  CHECK_THROWS_AS(NonlinearitySpec::power_law(4.5).validate(), Error);
  CHECK_THROWS_AS(NonlinearitySpec::power_law(0.0).validate(), Error);
  CHECK_THROWS_AS(NonlinearitySpec::hartree_kernel(-1.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(NonlinearitySpec::hartree_kernel(1.0, 0.0).validate(), Error);
  CHECK_NOTHROW(NonlinearitySpec::cubic().validate());
}

TEST_CASE("cutoff switches the power above theta for s > 1") {
  const PowerLaw p{2.0, 10.0};
  CHECK(cutoff(p, 4.0) == 1.0);
  CHECK(cutoff(p, 20.0) == doctest::Approx(std::pow(20.0, -1.0)));
  const double mid = cutoff(p, 7.5);
  CHECK(mid < 1.0);
  CHECK(mid > std::pow(7.5, -1.0));
  const double e = 1e-6;
  CHECK(cutoff_derivative(p, 7.5) ==
        doctest::Approx((cutoff(p, 7.5 + e) - cutoff(p, 7.5 - e)) / (2 * e)).epsilon(1e-6));
}

}  // TEST_SUITE
