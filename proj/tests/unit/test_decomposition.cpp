#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "solitonlab/decomposition.hpp"
#include "solitonlab/error.hpp"
#include "solitonlab/harness.hpp"
#include "solitonlab/manifold.hpp"
#include "support.hpp"

using namespace solitonlab;
using testing::wrap;

namespace {

const Grid kGrid(128.0, 4096);

ProfileCache& cache() {
  static ProfileCache c(NonlinearitySpec::cubic(), kGrid);
  return c;
}

const SolitonParams kS1{-10.0, 8.0, 0.3, 1.0};
const SolitonParams kS2{10.0, -8.0, 1.1, 1.5};

WaveField pair(const SolitonParams& s1, const SolitonParams& s2) {
  return synthesize(*cache().get(s1.mu), s1) + synthesize(*cache().get(s2.mu), s2);
}

SolitonParams perturbed(SolitonParams s, double e) {
  s.a += e;
  s.v -= e;
  s.gamma += e;
  s.mu -= e;
  return s;
}

double param_error(const SolitonParams& a, const SolitonParams& b) {
  return std::max({std::abs(a.a - b.a), std::abs(a.v - b.v), std::abs(wrap(a.gamma - b.gamma)),
                   std::abs(a.mu - b.mu)});
}

double max_pairing(const DecompositionResult& r) {
  double worst = 0.0;
  for (const auto& s : r.solitons) {
    const auto f = tangent_frame(*cache().get(s.mu), s);
    for (const auto& x : f.vectors) worst = std::max(worst, std::abs(symplectic(r.fluctuation, x)));
  }
  return worst;
}

double jacobian_defect(const SolitonParams& s1, const SolitonParams& s2, double fd_step) {
  const std::vector<SolitonParams> sig{s1, s2};
  DecompositionOptions opts;
  opts.fd_step = fd_step;
  const auto J = g_jacobian(pair(s1, s2), sig, cache(), opts);
  const auto f1 = tangent_frame(*cache().get(s1.mu), s1);
  const auto f2 = tangent_frame(*cache().get(s2.mu), s2);
  const std::array<const TangentFrame*, 2> frames{&f1, &f2};
  // d eta / d(a, v, gamma, mu) in the frame basis: (X_t, X_b / 2 - a X_g / 2, X_g, X_s).
  auto coeffs = [](const SolitonParams& s) {
    FrameMatrix c = FrameMatrix::Zero();
    c(0, kTranslation) = 1.0;
    c(1, kBoost) = 0.5;
    c(1, kGauge) = -0.5 * s.a;
    c(2, kGauge) = 1.0;
    c(3, kScaling) = 1.0;
    return c;
  };
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // omega(X^j_alpha, X^i_beta) for alpha in soliton j and beta in soliton i.
      const FrameMatrix pairing = cross_pairing(*frames[j], *frames[i]);
      const FrameMatrix expect = -(coeffs(sig[j]) * pairing).transpose();
      const FrameMatrix got = J.block<4, 4>(4 * i, 4 * j);
      worst = std::max(worst, (got - expect).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("decomposition") {

TEST_CASE("residual vanishes on the exact two-soliton sum") {
  const auto g = g_residual(pair(kS1, kS2), kS1, kS2, cache());
  CHECK(g.size() == 8);
  CHECK(g.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("residual is linear along a tangent direction") {
  const auto f1 = tangent_frame(*cache().get(kS1.mu), kS1);
  const auto omega = omega_matrix_numeric(f1).entries;
  const auto base = pair(kS1, kS2);
  for (double eps : {1e-3, 2e-3}) {
    const auto g = g_residual(base + cplx{eps, 0.0} * f1.vectors[kTranslation], kS1, kS2, cache());
    for (int b = 0; b < kFrameSize; ++b) CHECK(std::abs(g(b) - eps * omega(kTranslation, b)) <= 1e-12);
  }
}

TEST_CASE("residual ignores skew-orthogonal additions") {
  const std::vector<TangentFrame> frames{tangent_frame(*cache().get(kS1.mu), kS1),
                                         tangent_frame(*cache().get(kS2.mu), kS2)};
  const auto w = project_skew_orthogonal(testing::random_smooth(kGrid, 8), frames);
  const auto psi = pair(kS1, kS2) + cplx{0.3, 0.0} * testing::random_smooth(kGrid, 9);
  const auto g0 = g_residual(psi, kS1, kS2, cache());
  const auto g1 = g_residual(psi + w, kS1, kS2, cache());
  CHECK((g0 - g1).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("frequency outside the admissible interval is a domain error") {
  SolitonParams bad = kS2;
  bad.mu = 5.0;
  try {
    g_residual(pair(kS1, kS2), kS1, bad, cache());
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("round trip from perturbed guesses") {
  const auto psi = pair(kS1, kS2);
  const auto r = decompose(psi, perturbed(kS1, 1e-2), perturbed(kS2, -1e-2), cache());
  CHECK(param_error(r.sigma1(), kS1) <= 1e-9);
  CHECK(param_error(r.sigma2(), kS2) <= 1e-9);
  CHECK(r.w_l2 <= 1e-9);
  CHECK(r.residual_norm <= r.tolerance);
  const double norm2 = 2.0 * charge(psi);
  CHECK(max_pairing(r) <= 1e-10 * (1.0 + norm2));
  // psi = eta_1 + eta_2 + w by construction.
  const auto rebuilt = pair(r.sigma1(), r.sigma2()) + r.fluctuation;
  CHECK(testing::max_abs_diff(rebuilt, psi) <= 1e-12);
}

TEST_CASE("charge splits into fluctuation, masses and overlap") {
  const std::vector<TangentFrame> frames{tangent_frame(*cache().get(kS1.mu), kS1),
                                         tangent_frame(*cache().get(kS2.mu), kS2)};
  auto w0 = project_skew_orthogonal(testing::random_smooth(kGrid, 31), frames);
  w0 *= 0.05 / l2_norm(w0);
  const auto psi = pair(kS1, kS2) + w0;
  const auto r = decompose(psi, kS1, kS2, cache());
  const auto e1 = synthesize(*cache().get(r.sigma1().mu), r.sigma1());
  const auto e2 = synthesize(*cache().get(r.sigma2().mu), r.sigma2());
  const double lhs = 2.0 * charge(psi);
  const double rhs = r.w_l2 * r.w_l2 + 2.0 * cache().get(r.sigma1().mu)->profile->mass +
                     2.0 * cache().get(r.sigma2().mu)->profile->mass + 2.0 * inner(e1, e2);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
}

TEST_CASE("skew-orthogonal noise is returned as the fluctuation") {
  const std::vector<TangentFrame> frames{tangent_frame(*cache().get(kS1.mu), kS1),
                                         tangent_frame(*cache().get(kS2.mu), kS2)};
  auto w0 = project_skew_orthogonal(testing::random_smooth(kGrid, 12), frames);
  w0 *= 1e-3 / l2_norm(w0);
  const auto r = decompose(pair(kS1, kS2) + w0, perturbed(kS1, 5e-3), perturbed(kS2, 5e-3), cache());
  CHECK(param_error(r.sigma1(), kS1) <= 1e-8);
  CHECK(param_error(r.sigma2(), kS2) <= 1e-8);
  CHECK(std::abs(r.w_l2 - l2_norm(w0)) <= 1e-8);
}

TEST_CASE("global phase shifts only the phases") {
  const double theta = 0.77;
  const auto r0 = decompose(pair(kS1, kS2), kS1, kS2, cache());
  const auto r = decompose(std::polar(1.0, theta) * pair(kS1, kS2), kS1, kS2, cache());
  for (int i = 0; i < 2; ++i) {
    const auto& a = r0.solitons[i];
    const auto& b = r.solitons[i];
    CHECK(std::abs(wrap(b.gamma - a.gamma - theta)) <= 1e-9);
    CHECK(std::abs(b.a - a.a) <= 1e-9);
    CHECK(std::abs(b.v - a.v) <= 1e-9);
    CHECK(std::abs(b.mu - a.mu) <= 1e-9);
  }
}

TEST_CASE("distinct nearby guesses reach the same fit") {
  const std::vector<TangentFrame> frames{tangent_frame(*cache().get(kS1.mu), kS1),
                                         tangent_frame(*cache().get(kS2.mu), kS2)};
  auto w = testing::random_smooth(kGrid, 44);
  w *= 0.02 / l2_norm(w);
  const auto psi = pair(kS1, kS2) + w;
  const auto r1 = decompose(psi, perturbed(kS1, 1e-2), perturbed(kS2, 1e-2), cache());
  const auto r2 = decompose(psi, perturbed(kS1, -1e-2), perturbed(kS2, 7e-3), cache());
  CHECK(param_error(r1.sigma1(), r2.sigma1()) <= 1e-9);
  CHECK(param_error(r1.sigma2(), r2.sigma2()) <= 1e-9);
}

TEST_CASE("moving to the frame of the first soliton follows the group law") {
  const auto psi = pair(kS1, kS2);
  const GroupElement g1{kS1.a, kS1.v, kS1.gamma};
  const auto moved = apply_transform(inverse(g1), psi);
  const auto g2 = compose_group(inverse(g1), GroupElement{kS2.a, kS2.v, kS2.gamma});
  const SolitonParams expect{g2.a, g2.v, g2.gamma, kS2.mu};
  const auto r = decompose(moved, {0.0, 0.0, 0.0, kS1.mu}, perturbed(expect, 1e-3), cache());
  CHECK(param_error(r.sigma1(), {0.0, 0.0, 0.0, kS1.mu}) <= 1e-8);
  CHECK(param_error(r.sigma2(), expect) <= 1e-8);
}

TEST_CASE("Jacobian blocks match the pairing matrices entrywise to 1e-5") {
  CHECK(jacobian_defect(kS1, kS2, DecompositionOptions{}.fd_step) <= 1e-5);
}

TEST_CASE("Jacobian defect is first order in the difference step") {
  const SolitonParams s1{-10.0, 1.0, 0.3, 1.0}, s2{10.0, -1.0, 1.1, 1.5};
  const double coarse = jacobian_defect(s1, s2, 1e-6);
  const double fine = jacobian_defect(s1, s2, 1e-7);
  CHECK(coarse <= 1e-3);
  CHECK(coarse / fine == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("single-soliton fit") {
  const SolitonParams s{2.0, -1.0, 0.4, 2.0};
  const auto psi = synthesize(*cache().get(s.mu), s);
  const auto r = decompose(psi, std::vector<SolitonParams>{perturbed(s, 1e-2)}, cache());
  CHECK(r.solitons.size() == 1);
  CHECK(param_error(r.solitons[0], s) <= 1e-9);
}

TEST_CASE("iteration budget exhaustion carries the best residual") {
  DecompositionOptions opts;
  opts.max_iterations = 1;
  opts.polish_iterations = 0;
  try {
    decompose(pair(kS1, kS2), perturbed(kS1, 5e-2), perturbed(kS2, 5e-2), cache(), opts);
    FAIL("expected non-convergence");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
    CHECK(e.iterations() == 1);
  }
}

TEST_CASE("coincident solitons form a degenerate frame") {
  const SolitonParams s{0.0, 0.0, 0.0, 1.0};
  const auto psi = pair(s, s);
  try {
    decompose(psi, s, s, cache());
    FAIL("expected a degenerate frame");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFrame);
  }
}

TEST_CASE("tracking a free two-soliton movie") {
  const SolitonParams s1{-30.0, 1.0, 0.2, 1.0};
  const SolitonParams s2{30.0, -1.5, 0.0, 2.0};
  std::vector<WaveField> frames;
  std::vector<std::array<SolitonParams, 2>> truth;
  for (int k = 0; k <= 6; ++k) {
    const double t = 0.5 * k;
    SolitonParams a = s1, b = s2;
    a.a += a.v * t;
    a.gamma += (a.mu + a.v * a.v / 4.0) * t;
    b.a += b.v * t;
    b.gamma += (b.mu + b.v * b.v / 4.0) * t;
    auto f = pair(a, b);
    f.time = t;
    frames.push_back(f);
    truth.push_back({a, b});
  }
  const auto series = track(frames, s1, s2, cache());
  REQUIRE(series.size() == frames.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    CHECK(param_error(series[k].sigma1(), truth[k][0]) <= 1e-8);
    CHECK(param_error(series[k].sigma2(), truth[k][1]) <= 1e-8);
    // gamma stays on the continuous branch.
    CHECK(std::abs(series[k].sigma2().gamma - truth[k][1].gamma) <= 1e-8);
  }
  std::ostringstream csv;
  write_track_csv(csv, series);
  std::string header;
  std::getline(std::istringstream(csv.str()) >> std::ws, header);
  CHECK(header == "t,a1,v1,gamma1,mu1,a2,v2,gamma2,mu2,w_l2,residual,iterations");
}

TEST_CASE("constant frames give a constant series") {
  const auto psi = pair(kS1, kS2);
  std::vector<WaveField> frames(4, psi);
  for (std::size_t k = 0; k < frames.size(); ++k) frames[k].time = 0.0;
  Tracker tracker(cache(), {kS1, kS2});
  std::vector<DecompositionResult> out;
  for (auto& f : frames) out.push_back(tracker.next(f));
  for (const auto& r : out) {
    CHECK(param_error(r.sigma1(), kS1) <= 1e-12);
    CHECK(param_error(r.sigma2(), kS2) <= 1e-12);
  }
}

}  // TEST_SUITE
