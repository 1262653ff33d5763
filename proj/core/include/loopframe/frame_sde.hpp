#pragma once

#include "loopframe/nls_flow.hpp"
#include "loopframe/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace loopframe::frame_sde {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// SO(3) element. Construction through from_matrix enforces the orthogonality
// budget; the stepping loop works on raw matrices and is audited separately.
struct Rotation {
  Mat3 m = Mat3::Identity();

  static Rotation from_matrix(const Mat3& m, double tol = 1e-12);
};

double orthogonality_defect(const Mat3& m);  // ||m^T m - I||_F

// Drift/diffusion data of the frame equation at one (P, Q) point.
// A is the Ito drift as printed (diagonal 1/2 f1^2 + 1/2 f2^2 entries);
// A_strat = [[0,kappa,0],[-kappa,0,f3],[0,-f3,0]] is the skew matrix the
// exponential step uses. B and C are the two diffusion generators, both
// multiples of the same axis rotation.
struct SdeCoefficients {
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
  double kappa = 0.0;
  Mat3 A = Mat3::Zero();
  Mat3 A_strat = Mat3::Zero();
  Mat3 B = Mat3::Zero();
  Mat3 C = Mat3::Zero();
};

// Regularized torsion potential and its derived coefficients.
double sigma_eps(double P, double Q, double eps);
// (f1, f2, f3): f1 = d sigma_eps/dP, f2 = d sigma_eps/dQ, f3 as printed in
// the source equations (equals df1/dP + df2/dQ).
struct FCoefficients {
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
};
FCoefficients f_coefficients(double P, double Q, double eps);
SdeCoefficients coefficient_matrices(double P, double Q, double eps);

struct FrameConfig {
  double epsilon = 1e-2;
  double h = 1e-3;
  double T = 1.0;
  std::uint64_t seed = 0;
  Vec3 y0 = Vec3(0.0, 0.0, 1.0);
  // 0 records initial + terminal only; k > 0 also records every k-th step.
  std::int64_t record_stride = 0;
  bool store_rotations = false;
  // Past s = 2 pi the literal bridge formula W(s) - s W(2pi)/(2 pi) keeps
  // running (the path no longer pins at multiples of 2 pi); this flag wraps
  // the bridge periodically instead.
  bool periodic_extension = false;
};

// Coupled driving noise for one path. Increments are sqrt(h) normals, drawn
// interleaved (dW1 then dW2 per step), accumulated far enough to read off
// W(2 pi) at index round(2 pi / h) even when T < 2 pi.
struct BridgePaths {
  double h = 0.0;
  std::int64_t steps = 0;       // X-steps; P,Q defined at 0..steps
  std::vector<double> dW1, dW2;  // size max(steps, round(2pi/h))
  std::vector<double> P, Q;      // size steps + 1
  double w1_2pi = 0.0, w2_2pi = 0.0;
};

BridgePaths brownian_bridge_paths(rng::Gaussian& g, double h, double T,
                                  bool periodic_extension = false);

// Rebuilds P, Q (and W(2pi) unless overridden with finite values) from given
// increments; lets refinement studies reuse one fine noise realization across
// step sizes, with the bridge functional held fixed.
BridgePaths bridge_from_increments(std::vector<double> dW1, std::vector<double> dW2,
                                   double h, std::int64_t steps,
                                   bool periodic_extension = false,
                                   double w1_2pi_override = std::numeric_limits<double>::quiet_NaN(),
                                   double w2_2pi_override = std::numeric_limits<double>::quiet_NaN());

// exp of a 3x3 skew matrix, closed form; the series fallback below
// ||omega|| = 1e-8 avoids the 0/0. Throws if the input is not skew to 1e-12.
Mat3 rodrigues_exp(const Mat3& skew);

// One geometric Euler-Maruyama step:
//   M = (A_strat - bd1 B - bd2 C) h + B dW1 + C dW2,  X' = exp(M) X.
// bd1, bd2 are the bridge drifts W1(2pi)/2pi, W2(2pi)/2pi.
Mat3 gem_step(const Mat3& X, const SdeCoefficients& k, double dW1, double dW2,
              double h, double bd1, double bd2);

struct FramePath {
  std::vector<double> s;
  std::vector<Vec3> y;
  std::vector<double> theta;  // atan2(y_y, y_x); 0 at the poles
  std::vector<double> phi;    // acos(y_z)
  std::vector<Rotation> rotations;  // only when store_rotations
  double terminal_defect = 0.0;     // orthogonality defect of X(T)
};

// Full path simulation from X(0) = I driven by stream (config.seed, path_id).
FramePath simulate_frame_path(const FrameConfig& config, std::uint64_t path_id);
// Same stepping on caller-supplied noise.
FramePath simulate_frame_path(const FrameConfig& config, const BridgePaths& noise);

// Frame transport along x for a smooth spectral field: X advanced cell by
// cell with exp(Omega1 * dx), Omega1 = [[0,kappa,0],[-kappa,0,tau],[0,-tau,0]]
// evaluated at the cell midpoint (kappa = |u|, tau = f1 P_x + f2 Q_x, the
// exact chain rule for d sigma_eps/dx on smooth fields). Returns X at every
// grid point, X(xGrid[0]) = I.
std::vector<Rotation> serret_frenet_deterministic(const nls_flow::NlsState& field,
                                                  double eps,
                                                  const std::vector<double>& xGrid);

}  // namespace loopframe::frame_sde
