#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "solitonlab/error.hpp"
#include "solitonlab/manifold.hpp"
#include "solitonlab/profiles.hpp"
#include "support.hpp"

using namespace solitonlab;

namespace {

const Grid kGrid(128.0, 2048);
const Grid kWide(256.0, 8192);

ProfileCache& cubic_cache() {
  static ProfileCache cache(NonlinearitySpec::cubic(), kGrid);
  return cache;
}

ProfileCache& wide_cache() {
  static ProfileCache cache(NonlinearitySpec::cubic(), kWide);
  return cache;
}

double max_entry(const FrameMatrix& m) { return m.cwiseAbs().maxCoeff(); }

const cplx kI{0.0, 1.0};

}  // namespace

TEST_SUITE("manifold") {

TEST_CASE("frame vectors at rest") {
  const double mu = 1.0;
  const auto prepared = cubic_cache().get(mu);
  const auto f = tangent_frame(*prepared, {0.0, 0.0, 0.0, mu});
  const auto& eta = f.soliton;
  CHECK(testing::max_abs_diff(f.vectors[kGauge], kI * eta) == 0.0);
  CHECK(f.vectors[kTranslation].imaginary_fraction() <= 1e-14);
  for (std::size_t j = 0; j < kGrid.points; ++j) {
    const double x = kGrid.x(j);
    CHECK(std::abs(f.vectors[kBoost].samples[j] - kI * x * eta.samples[j]) <= 1e-14);
    const double s = testing::sech(x);
    CHECK(std::abs(f.vectors[kTranslation].samples[j].real() - std::sqrt(2.0) * s * std::tanh(x)) <= 1e-8);
  }
}

TEST_CASE("gauge vector is i times the soliton at a generic point") {
  const auto f = tangent_frame(*cubic_cache().get(1.7), {4.0, -3.0, 1.2, 1.7});
  CHECK(testing::max_abs_diff(f.vectors[kGauge], kI * f.soliton) == 0.0);
}

TEST_CASE("closed-form matrix entries") {
  const auto m = omega_matrix_closed({0.0, 0.0, 0.0, 1.0}, 2.0, 1.0);
  FrameMatrix expect;
  expect << 0, -2, 0, 0, 2, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  CHECK((m.entries - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.provenance == SymplecticMatrix::Provenance::ClosedForm);
  const auto g = omega_matrix_closed({1.5, 3.0, 0.4, 1.0}, 2.0, 1.0);
  CHECK(g.entries(0, 3) == doctest::Approx(-0.5 * 3.0 * 1.0));
  for (double a : {-5.0, 0.0, 7.0}) {
    for (double v : {-4.0, 0.0, 9.0}) {
      CHECK(std::abs(omega_matrix_closed({a, v, 0.0, 1.0}, 2.0, 1.0).entries.determinant()) > 0.0);
    }
  }
  CHECK_THROWS_AS(omega_matrix_closed({0.0, 0.0, 0.0, 1.0}, 2.0, 0.0), Error);
}

TEST_CASE("numeric matrix agrees with the closed form") {
  const SolitonParams s{3.0, 2.0, 0.7, 1.0};
  const auto f = tangent_frame(*cubic_cache().get(s.mu), s);
  const auto num = omega_matrix_numeric(f);
  const auto closed = omega_matrix_closed(s, 2.0 * std::sqrt(s.mu), 1.0 / std::sqrt(s.mu));
  CHECK((num.entries - closed.entries).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(num.antisymmetry_defect() <= 1e-12);
  CHECK(std::abs(num.entries(kGauge, kScaling) - 1.0) <= 1e-6);
  CHECK(num.smallest_singular_value() > 0.0);
}

TEST_CASE("numeric matrix property over random points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(-20.0, 20.0), v(-6.0, 6.0), g(0.0, 6.2), mu(0.5, 4.0);
  for (int i = 0; i < 6; ++i) {
    const SolitonParams s{a(rng), v(rng), g(rng), mu(rng)};
    const auto num = omega_matrix_numeric(tangent_frame(*cubic_cache().get(s.mu), s));
    const auto closed = omega_matrix_closed(s, 2.0 * std::sqrt(s.mu), 1.0 / std::sqrt(s.mu));
    CHECK((num.entries - closed.entries).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("Hessian zero modes") {
  const double mu = 1.0;
  const auto prepared = cubic_cache().get(mu);
  const auto& prof = *prepared->profile;
  const auto f = tangent_frame(*prepared, {0.0, 0.0, 0.0, mu});
  const auto& Et = f.vectors[kTranslation];
  const auto& Eg = f.vectors[kGauge];
  CHECK(l2_norm(hessian_apply(prof, Et)) <= 1e-6 * l2_norm(Et));
  CHECK(l2_norm(hessian_apply(prof, Eg)) <= 1e-6 * l2_norm(Eg));
  const auto Ls = hessian_apply(prof, f.vectors[kScaling]);
  CHECK(l2_norm(Ls - kI * Eg) <= 1e-4);
  for (const auto& X : f.vectors) {
    const auto once = kI * hessian_apply(prof, X);
    const auto twice = kI * hessian_apply(prof, once);
    CHECK(l2_norm(twice) <= 1e-4 * l2_norm(X));
  }
}

TEST_CASE("Hessian maps the boost vector to twice i E_t") {
  const auto prepared = cubic_cache().get(1.0);
  const auto f = tangent_frame(*prepared, {0.0, 0.0, 0.0, 1.0});
  const auto Lb = hessian_apply(*prepared->profile, f.vectors[kBoost]);
  // L_mu (i x eta) = i (-2 eta') with E_t = -eta'.
  CHECK(l2_norm(Lb - cplx{0.0, 2.0} * f.vectors[kTranslation]) <= 1e-6);
}

TEST_CASE("boost zero mode identity L E_b = i E_t") {
  const auto prepared = cubic_cache().get(1.0);
  const auto f = tangent_frame(*prepared, {0.0, 0.0, 0.0, 1.0});
  const auto Lb = hessian_apply(*prepared->profile, f.vectors[kBoost]);
  CHECK(l2_norm(Lb - kI * f.vectors[kTranslation]) <= 1e-6);
}

TEST_CASE("Hessian of the cubic problem acts componentwise") {
  const auto prepared = cubic_cache().get(1.0);
  const auto& prof = *prepared->profile;
  const auto w = testing::random_smooth(kGrid, 3, 0.1);
  const auto lw = hessian_apply(prof, w);
  WaveField re = w, im = w;
  for (auto& z : re.samples) z = z.real();
  for (auto& z : im.samples) z = cplx{0.0, z.imag()};
  CHECK(testing::max_abs_diff(lw, hessian_apply(prof, re) + hessian_apply(prof, im)) <= 1e-12);
}

TEST_CASE("cross pairing reduces to the numeric matrix for coincident solitons") {
  const SolitonParams s{-2.0, 1.5, 0.3, 1.2};
  const auto p = cubic_cache().get(s.mu);
  const auto cp = cross_pairing(*p, s, *p, s);
  const auto num = omega_matrix_numeric(tangent_frame(*p, s));
  CHECK((cp - num.entries).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("cross pairing decays with relative speed and separation") {
  auto& cache = wide_cache();
  const auto p = cache.get(1.0);
  std::vector<double> by_speed;
  for (double dv : {8.0, 16.0, 32.0}) {
    by_speed.push_back(max_entry(cross_pairing(*p, {0.0, 0.5 * dv, 0.0, 1.0}, *p, {0.0, -0.5 * dv, 0.0, 1.0})));
  }
  CHECK(by_speed[0] / by_speed[1] >= 1.8);
  CHECK(by_speed[1] / by_speed[2] >= 1.8);
  CHECK(max_entry(cross_pairing(*p, {-15.0, 0.0, 0.0, 1.0}, *p, {15.0, 0.0, 0.0, 1.0})) <= 1e-9);
  std::vector<double> by_distance;
  for (double d : {6.0, 10.0, 14.0, 18.0}) {
    by_distance.push_back(max_entry(cross_pairing(*p, {-0.5 * d, 0.5, 0.0, 1.0}, *p, {0.5 * d, 0.5, 0.0, 1.0})));
  }
  for (std::size_t i = 1; i < by_distance.size(); ++i) CHECK(by_distance[i] <= 1.1 * by_distance[i - 1]);
  // Empirical decay rate lies in (0, min sqrt(mu)] up to fit error.
  const double rate = std::log(by_distance[1] / by_distance[3]) / 8.0;
  CHECK(rate > 0.0);
  CHECK(rate <= 1.05);
}

TEST_CASE("matrix CSV is row major with full precision") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0, 0.1, -2.5, 1.0 / 3.0, 0.0, 1e-300;
  std::ostringstream out;
  write_matrix_csv(out, m);
  CHECK(out.str() == "1,0.10000000000000001,-2.5\n0.33333333333333331,0,1e-300\n");
}

}  // TEST_SUITE
