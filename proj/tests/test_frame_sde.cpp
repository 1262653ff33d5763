#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopframe/frame_sde.hpp"
#include "loopframe/transport_stats.hpp"

#include <cmath>
#include <vector>

using namespace loopframe;
using frame_sde::Mat3;
using frame_sde::Vec3;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Order-6 Taylor exponential with scaling and squaring; independent of the
// closed form under test.
Mat3 taylor_exp(Mat3 m) {
  int squarings = 0;
  while (m.norm() > 0.25) {
    m *= 0.5;
    ++squarings;
  }
  Mat3 acc = Mat3::Identity();
  Mat3 term = Mat3::Identity();
  for (int k = 1; k <= 12; ++k) {
    term = term * m / static_cast<double>(k);
    acc += term;
  }
  for (int i = 0; i < squarings; ++i) acc = acc * acc;
  return acc;
}

Mat3 skew_of(double a, double b, double c) {
  Mat3 m;
  m << 0.0, a, b,
      -a, 0.0, c,
      -b, -c, 0.0;
  return m;
}
}  // namespace

TEST_CASE("torsion potential derivatives match finite differences") {
  const double d = 1e-6;
  const std::vector<std::array<double, 3>> pts = {
      {0.5, 0.3, 1e-2}, {-1.2, 0.8, 1e-2}, {0.05, -2.0, 0.1},
      {2.0, 2.0, 1.0},  {1e-3, 0.4, 1e-2},
  };
  for (const auto& [P, Q, eps] : pts) {
    auto f = frame_sde::f_coefficients(P, Q, eps);
    double f1_fd = (frame_sde::sigma_eps(P + d, Q, eps) -
                    frame_sde::sigma_eps(P - d, Q, eps)) /
                   (2 * d);
    double f2_fd = (frame_sde::sigma_eps(P, Q + d, eps) -
                    frame_sde::sigma_eps(P, Q - d, eps)) /
                   (2 * d);
    CHECK(f.f1 == doctest::Approx(f1_fd).epsilon(1e-5));
    CHECK(f.f2 == doctest::Approx(f2_fd).epsilon(1e-5));
    auto fp = frame_sde::f_coefficients(P + d, Q, eps);
    auto fm = frame_sde::f_coefficients(P - d, Q, eps);
    auto gp = frame_sde::f_coefficients(P, Q + d, eps);
    auto gm = frame_sde::f_coefficients(P, Q - d, eps);
    double f3_fd = (fp.f1 - fm.f1) / (2 * d) + (gp.f2 - gm.f2) / (2 * d);
    CHECK(f.f3 == doctest::Approx(f3_fd).epsilon(1e-4));
  }
}

TEST_CASE("coefficient matrices carry the expected structure") {
  auto k = frame_sde::coefficient_matrices(0.7, -0.4, 1e-2);
  CHECK(k.kappa == doctest::Approx(std::hypot(0.7, -0.4)).epsilon(1e-15));
  // Stratonovich part is skew.
  CHECK((k.A_strat + k.A_strat.transpose()).norm() < 1e-15);
  CHECK(k.A_strat(0, 1) == k.kappa);
  CHECK(k.A_strat(1, 2) == k.f3);
  // Ito drift differs from it only on the lower-right diagonal block.
  Mat3 diff = k.A - k.A_strat;
  const double d = 0.5 * (k.f1 * k.f1 + k.f2 * k.f2);
  CHECK(diff(1, 1) == doctest::Approx(d).epsilon(1e-15));
  CHECK(diff(2, 2) == doctest::Approx(d).epsilon(1e-15));
  CHECK(diff(0, 0) == 0.0);
  CHECK(std::abs(diff.norm() - std::sqrt(2.0) * d) < 1e-15);
  // Both diffusion generators rotate about the same axis.
  CHECK(k.B(1, 2) == k.f1);
  CHECK(k.C(1, 2) == k.f2);
  CHECK((k.B + k.B.transpose()).norm() == 0.0);
  CHECK((k.C + k.C.transpose()).norm() == 0.0);
}

TEST_CASE("rodrigues exponential agrees with a Taylor oracle") {
  const std::vector<std::array<double, 3>> axes = {
      {0.3, -0.2, 0.7}, {3.0, 1.0, -2.0}, {1e-10, 2e-10, -1e-10},
      {1e-7, 0.0, 0.0}, {0.0, 0.0, 0.0},  {-2.9, 2.9, 2.9},
  };
  for (const auto& [a, b, c] : axes) {
    Mat3 s = skew_of(a, b, c);
    Mat3 e = frame_sde::rodrigues_exp(s);
    CHECK((e - taylor_exp(s)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(frame_sde::orthogonality_defect(e) < 1e-13);
    CHECK(e.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
  Mat3 not_skew = Mat3::Identity();
  CHECK_THROWS(frame_sde::rodrigues_exp(not_skew));
}

TEST_CASE("gem step is an exact rotation of the previous frame") {
  rng::Gaussian g(6, 0);
  Mat3 X = Mat3::Identity();
  auto k = frame_sde::coefficient_matrices(0.9, 0.2, 1e-2);
  for (int i = 0; i < 1000; ++i)
    X = frame_sde::gem_step(X, k, 0.03 * g(), 0.03 * g(), 1e-3, 0.1, -0.2);
  CHECK(frame_sde::orthogonality_defect(X) < 1e-12);

  // Pure-noise coefficients reduce the step to exp(B dW1).
  frame_sde::SdeCoefficients nb;
  nb.B = skew_of(0.0, 0.0, 0.5);
  Mat3 one = frame_sde::gem_step(Mat3::Identity(), nb, 0.7, 0.3, 1e-3, 0.0, 0.0);
  CHECK((one - frame_sde::rodrigues_exp(skew_of(0.0, 0.0, 0.35))).norm() < 1e-15);
}

TEST_CASE("bridge pins at 2 pi and reproduces by stream") {
  const double h = 1e-3;
  rng::Gaussian a(9, 4), b(9, 4);
  auto p1 = frame_sde::brownian_bridge_paths(a, h, 2.0);
  auto p2 = frame_sde::brownian_bridge_paths(b, h, 2.0);
  CHECK(p1.P == p2.P);
  CHECK(p1.Q == p2.Q);
  CHECK(p1.P[0] == 0.0);
  CHECK(p1.steps == 2000);
  // W(2 pi) sits at the rounded lattice index even though T < 2 pi.
  const std::int64_t n2pi = std::llround(kTwoPi / h);
  double w1 = 0.0;
  for (std::int64_t m = 0; m < n2pi; ++m) w1 += p1.dW1[m];
  CHECK(p1.w1_2pi == doctest::Approx(w1).epsilon(1e-12));

  rng::Gaussian c(9, 4);
  auto full = frame_sde::brownian_bridge_paths(c, h, 7.0);
  // At the pinning index the bridge is zero up to the lattice mismatch
  // between n2pi * h and 2 pi itself.
  CHECK(std::abs(full.P[n2pi]) < 1e-3);
  CHECK(std::abs(full.Q[n2pi]) < 1e-3);
}

TEST_CASE("periodic extension wraps the bridge") {
  const double h = 1e-2;
  rng::Gaussian g(5, 1);
  auto p = frame_sde::brownian_bridge_paths(g, h, 13.0, true);
  const std::int64_t n2pi = std::llround(kTwoPi / h);
  for (std::int64_t m = n2pi + 1; m <= p.steps; ++m) {
    CHECK(p.P[m] == p.P[m % n2pi]);
    CHECK(p.Q[m] == p.Q[m % n2pi]);
  }
}

TEST_CASE("coarsened increments reproduce the fine bridge on shared points") {
  const double hf = 1e-3, hc = 4e-3;
  rng::Gaussian g(31, 2);
  // The coarse 2 pi index rounds up, so the fine horizon must run past
  // 4 * round(2 pi / hc) increments; T = 7 gives 7000 of them.
  auto fine = frame_sde::brownian_bridge_paths(g, hf, 7.0);
  const std::int64_t coarse_steps = 500;
  std::vector<double> d1(std::max<std::int64_t>(coarse_steps,
                                                std::llround(kTwoPi / hc)));
  std::vector<double> d2(d1.size());
  REQUIRE(d1.size() * 4 <= fine.dW1.size());
  for (size_t m = 0; m < d1.size(); ++m) {
    d1[m] = d2[m] = 0.0;
    for (int i = 0; i < 4; ++i) {
      d1[m] += fine.dW1[4 * m + i];
      d2[m] += fine.dW2[4 * m + i];
    }
  }
  auto coarse = frame_sde::bridge_from_increments(std::move(d1), std::move(d2), hc,
                                                  coarse_steps, false,
                                                  fine.w1_2pi, fine.w2_2pi);
  CHECK(coarse.w1_2pi == fine.w1_2pi);
  for (std::int64_t m = 0; m <= coarse_steps; ++m) {
    CHECK(coarse.P[m] == doctest::Approx(fine.P[4 * m]).epsilon(1e-10));
    CHECK(coarse.Q[m] == doctest::Approx(fine.Q[4 * m]).epsilon(1e-10));
  }
}

TEST_CASE("frame paths stay on the rotation group and the sphere") {
  frame_sde::FrameConfig cfg;
  cfg.seed = 12;
  cfg.h = 1e-3;
  cfg.T = 10.0;
  cfg.record_stride = 500;
  auto path = frame_sde::simulate_frame_path(cfg, 3);
  CHECK(path.terminal_defect < 1e-11);
  REQUIRE(path.s.size() == 21);  // s = 0, then every 0.5 up to 10
  CHECK(path.s.front() == 0.0);
  CHECK(path.s.back() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(path.theta.front() == 0.0);
  CHECK(path.phi.front() == 0.0);
  for (size_t i = 0; i < path.y.size(); ++i) {
    CHECK(path.y[i].norm() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(path.theta[i] >= -3.1415926535897932);
    CHECK(path.theta[i] <= 3.1415926535897932);
    CHECK(path.phi[i] >= 0.0);
    CHECK(path.phi[i] <= 3.1415926535897932);
  }
}

TEST_CASE("record stride zero keeps endpoints only") {
  frame_sde::FrameConfig cfg;
  cfg.seed = 1;
  cfg.h = 1e-2;
  cfg.T = 1.0;
  auto path = frame_sde::simulate_frame_path(cfg, 0);
  REQUIRE(path.s.size() == 2);
  CHECK(path.s[0] == 0.0);
  CHECK(path.s[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(path.rotations.empty());

  cfg.store_rotations = true;
  auto with_rot = frame_sde::simulate_frame_path(cfg, 0);
  REQUIRE(with_rot.rotations.size() == 2);
  CHECK(frame_sde::orthogonality_defect(with_rot.rotations[1].m) < 1e-12);
}

TEST_CASE("long runs equilibrate to the uniform sphere measure") {
  frame_sde::FrameConfig cfg;
  cfg.seed = 77;
  cfg.h = 2e-3;
  cfg.T = 6.3;
  std::vector<double> theta, phi;
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto path = frame_sde::simulate_frame_path(cfg, i);
    theta.push_back(path.theta.back());
    phi.push_back(path.phi.back());
  }
  auto kt = transport_stats::ks_test(theta, transport_stats::longitude_reference());
  auto kp = transport_stats::ks_test(phi, transport_stats::colatitude_reference());
  CHECK(kt.p > 1e-3);
  CHECK(kp.p > 1e-3);
}

TEST_CASE("constant curvature transports along a great circle") {
  // u = 1: kappa = 1, tau = 0, so X(s) = exp(s G) with G the (0,1) generator.
  nls_flow::NlsState field(4, 1.0);
  field.set(0, std::complex<double>(1.0, 0.0));
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(i * 0.01);
  auto frames = frame_sde::serret_frenet_deterministic(field, 1e-2, grid);
  REQUIRE(frames.size() == grid.size());
  for (size_t i = 0; i < grid.size(); i += 40) {
    Mat3 expect = frame_sde::rodrigues_exp(skew_of(grid[i], 0.0, 0.0));
    CHECK((frames[i].m - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("deterministic transport self-converges at second order") {
  nls_flow::NlsState field(6, 1.0);
  field.set(0, std::complex<double>(0.9, 0.0));
  field.set(1, std::complex<double>(0.3, 0.1));
  field.set(-1, std::complex<double>(0.3, -0.1));
  field.set(2, std::complex<double>(0.0, -0.2));
  auto run = [&](int cells) {
    std::vector<double> grid;
    for (int i = 0; i <= cells; ++i) grid.push_back(2.0 * i / cells);
    return frame_sde::serret_frenet_deterministic(field, 1e-2, grid).back().m;
  };
  Mat3 a = run(100), b = run(200), c = run(400);
  double e1 = (a - c).norm(), e2 = (b - c).norm();
  // Richardson against the finest grid: ratio (4 - 1) for a second-order rule.
  CHECK(e1 / e2 == doctest::Approx(5.0).epsilon(0.35));
}
