#include "loopframe/frame_sde.hpp"

#include <cmath>
#include <stdexcept>

namespace loopframe::frame_sde {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPoleSin = 1e-12;
}  // namespace

double orthogonality_defect(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).norm();
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  if (orthogonality_defect(m) > tol)
    throw std::invalid_argument("Rotation: orthogonality defect exceeds tolerance");
  if (std::abs(m.determinant() - 1.0) > tol)
    throw std::invalid_argument("Rotation: determinant is not +1");
  return Rotation{m};
}

double sigma_eps(double P, double Q, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sigma_eps: eps must be positive");
  return std::atan(P * Q / (P * P + eps * eps));
}

FCoefficients f_coefficients(double P, double Q, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("f_coefficients: eps must be positive");
  const double e2 = eps * eps;
  const double P2 = P * P, Q2 = Q * Q;
  const double r = e2 + P2;          // eps^2 + P^2
  const double D = r * r + P2 * Q2;  // shared denominator
  FCoefficients f;
  f.f1 = (e2 - P2) * Q / D;
  f.f2 = P * r / D;
  f.f3 = (-2.0 * P2 * P * Q * r - 2.0 * P * Q * D -
          (e2 - P2) * Q * (2.0 * P * Q2 + 4.0 * P * r)) /
         (D * D);
  return f;
}

SdeCoefficients coefficient_matrices(double P, double Q, double eps) {
  const FCoefficients f = f_coefficients(P, Q, eps);
  SdeCoefficients k;
  k.f1 = f.f1;
  k.f2 = f.f2;
  k.f3 = f.f3;
  k.kappa = std::sqrt(P * P + Q * Q);
  const double d = 0.5 * f.f1 * f.f1 + 0.5 * f.f2 * f.f2;
  k.A << 0.0, k.kappa, 0.0,
      -k.kappa, d, f.f3,
      0.0, -f.f3, d;
  k.A_strat << 0.0, k.kappa, 0.0,
      -k.kappa, 0.0, f.f3,
      0.0, -f.f3, 0.0;
  k.B << 0.0, 0.0, 0.0,
      0.0, 0.0, f.f1,
      0.0, -f.f1, 0.0;
  k.C << 0.0, 0.0, 0.0,
      0.0, 0.0, f.f2,
      0.0, -f.f2, 0.0;
  return k;
}

BridgePaths bridge_from_increments(std::vector<double> dW1, std::vector<double> dW2,
                                   double h, std::int64_t steps,
                                   bool periodic_extension, double w1_2pi_override,
                                   double w2_2pi_override) {
  if (!(h > 0.0)) throw std::invalid_argument("bridge: h must be positive");
  if (steps < 1) throw std::invalid_argument("bridge: need at least one step");
  if (dW1.size() != dW2.size())
    throw std::invalid_argument("bridge: increment arrays differ in length");
  const std::int64_t n2pi = std::llround(kTwoPi / h);
  if (n2pi < 1) throw std::invalid_argument("bridge: h too large to resolve 2 pi");
  const std::int64_t total = std::max(steps, n2pi);
  if (static_cast<std::int64_t>(dW1.size()) < total)
    throw std::invalid_argument("bridge: too few increments to reach max(T, 2 pi)");

  std::vector<double> W1(total + 1, 0.0), W2(total + 1, 0.0);
  for (std::int64_t m = 0; m < total; ++m) {
    W1[m + 1] = W1[m] + dW1[m];
    W2[m + 1] = W2[m] + dW2[m];
  }
  BridgePaths b;
  b.h = h;
  b.steps = steps;
  b.w1_2pi = std::isnan(w1_2pi_override) ? W1[n2pi] : w1_2pi_override;
  b.w2_2pi = std::isnan(w2_2pi_override) ? W2[n2pi] : w2_2pi_override;
  b.P.resize(steps + 1);
  b.Q.resize(steps + 1);
  for (std::int64_t m = 0; m <= steps; ++m) {
    std::int64_t idx = m;
    if (periodic_extension && m > n2pi) idx = m % n2pi;
    const double s = idx * h;
    b.P[m] = W1[idx] - s * b.w1_2pi / kTwoPi;
    b.Q[m] = W2[idx] - s * b.w2_2pi / kTwoPi;
  }
  b.dW1 = std::move(dW1);
  b.dW2 = std::move(dW2);
  return b;
}

BridgePaths brownian_bridge_paths(rng::Gaussian& g, double h, double T,
                                  bool periodic_extension) {
  if (!(h > 0.0) || !(T > 0.0))
    throw std::invalid_argument("brownian_bridge_paths: need h > 0 and T > 0");
  const std::int64_t steps = std::llround(T / h);
  if (steps < 1)
    throw std::invalid_argument("brownian_bridge_paths: T shorter than one step");
  const std::int64_t n2pi = std::llround(kTwoPi / h);
  const std::int64_t total = std::max(steps, n2pi);
  std::vector<double> dW1(total), dW2(total);
  const double rt = std::sqrt(h);
  for (std::int64_t m = 0; m < total; ++m) {
    dW1[m] = rt * g();
    dW2[m] = rt * g();
  }
  return bridge_from_increments(std::move(dW1), std::move(dW2), h, steps,
                                periodic_extension);
}

Mat3 rodrigues_exp(const Mat3& skew) {
  if ((skew + skew.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("rodrigues_exp: matrix is not skew-symmetric");
  const double a = skew(0, 1), b = skew(0, 2), c = skew(1, 2);
  const double w2 = a * a + b * b + c * c;
  const double w = std::sqrt(w2);
  double s, t;  // sin(w)/w and (1-cos(w))/w^2
  if (w < 1e-8) {
    s = 1.0 - w2 / 6.0;
    t = 0.5 - w2 / 24.0;
  } else {
    s = std::sin(w) / w;
    t = (1.0 - std::cos(w)) / w2;
  }
  return Mat3::Identity() + s * skew + t * (skew * skew);
}

Mat3 gem_step(const Mat3& X, const SdeCoefficients& k, double dW1, double dW2,
              double h, double bd1, double bd2) {
  Mat3 M = (k.A_strat - bd1 * k.B - bd2 * k.C) * h + k.B * dW1 + k.C * dW2;
  return rodrigues_exp(M) * X;
}

namespace {

void record_point(FramePath& path, double s, const Mat3& X, const Vec3& y0,
                  bool store_rotation) {
  Vec3 y = X * y0;
  path.s.push_back(s);
  path.y.push_back(y);
  const double sin_phi = std::hypot(y.x(), y.y());
  path.theta.push_back(sin_phi < kPoleSin ? 0.0 : std::atan2(y.y(), y.x()));
  path.phi.push_back(std::acos(std::clamp(y.z(), -1.0, 1.0)));
  if (store_rotation) path.rotations.push_back(Rotation{X});
}

}  // namespace

FramePath simulate_frame_path(const FrameConfig& config, const BridgePaths& noise) {
  const std::int64_t steps = noise.steps;
  const double h = noise.h;
  const double bd1 = noise.w1_2pi / kTwoPi;
  const double bd2 = noise.w2_2pi / kTwoPi;
  FramePath path;
  Mat3 X = Mat3::Identity();
  record_point(path, 0.0, X, config.y0, config.store_rotations);
  for (std::int64_t m = 0; m < steps; ++m) {
    const SdeCoefficients k =
        coefficient_matrices(noise.P[m], noise.Q[m], config.epsilon);
    X = gem_step(X, k, noise.dW1[m], noise.dW2[m], h, bd1, bd2);
    const std::int64_t step = m + 1;
    const bool record = step == steps || (config.record_stride > 0 &&
                                          step % config.record_stride == 0);
    if (record)
      record_point(path, step * h, X, config.y0, config.store_rotations);
  }
  path.terminal_defect = orthogonality_defect(X);
  return path;
}

FramePath simulate_frame_path(const FrameConfig& config, std::uint64_t path_id) {
  rng::Gaussian g(config.seed, path_id);
  BridgePaths noise =
      brownian_bridge_paths(g, config.h, config.T, config.periodic_extension);
  return simulate_frame_path(config, noise);
}

std::vector<Rotation> serret_frenet_deterministic(const nls_flow::NlsState& field,
                                                  double eps,
                                                  const std::vector<double>& xGrid) {
  if (xGrid.size() < 1)
    throw std::invalid_argument("serret_frenet_deterministic: empty grid");
  for (size_t i = 1; i < xGrid.size(); ++i)
    if (!(xGrid[i] > xGrid[i - 1]))
      throw std::invalid_argument("serret_frenet_deterministic: grid not increasing");

  std::vector<Rotation> out;
  out.reserve(xGrid.size());
  Mat3 X = Mat3::Identity();
  out.push_back(Rotation{X});
  for (size_t i = 1; i < xGrid.size(); ++i) {
    const double dx = xGrid[i] - xGrid[i - 1];
    const double xm = 0.5 * (xGrid[i] + xGrid[i - 1]);
    const auto u = nls_flow::evaluate_at(field, xm);
    const auto ux = nls_flow::derivative_at(field, xm);
    const double P = u.real(), Q = u.imag();
    const double kappa = std::abs(u);
    const FCoefficients f = f_coefficients(P, Q, eps);
    const double tau = f.f1 * ux.real() + f.f2 * ux.imag();
    Mat3 omega;
    omega << 0.0, kappa, 0.0,
        -kappa, 0.0, tau,
        0.0, -tau, 0.0;
    X = rodrigues_exp(omega * dx) * X;
    out.push_back(Rotation{X});
  }
  return out;
}

}  // namespace loopframe::frame_sde
