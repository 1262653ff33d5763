#pragma once

#include "loopframe/loop_sampler.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace loopframe::nls_flow {

using cplx = std::complex<double>;

// Spectral state of i u_t = -u_xx + beta |u|^2 u on the circle, truncated to
// |k| <= n. Unlike a loop sample, the mean mode is a legitimate degree of
// freedom here.
class NlsState {
 public:
  NlsState() = default;
  NlsState(int n, double beta);

  int modes() const { return n_; }
  double beta() const { return beta_; }
  double time() const { return t_; }
  void advance_time(double dt) { t_ += dt; }

  cplx c(int k) const;
  void set(int k, cplx v);
  const std::vector<cplx>& centered() const { return coeff_; }

 private:
  int n_ = 0;
  double beta_ = 0.0;
  double t_ = 0.0;
  std::vector<cplx> coeff_;  // size 2n+1, slot k+n
};

NlsState from_loop(const loop_sampler::LoopSample& s, double beta);

// Conservation audit over an evolve() call. Drifts are max |H(t) - H(0)|
// across all completed steps; rel is against |H(0)| (0 when H(0) == 0).
struct DriftReport {
  double h1_initial = 0.0, h2_initial = 0.0, h3_initial = 0.0;
  double h1_drift = 0.0, h2_drift = 0.0, h3_drift = 0.0;
  double h1_rel_drift = 0.0;
};

std::vector<cplx> evaluate_field(const NlsState& s, int M);
// Direct mode sums; x in radians, any value.
cplx evaluate_at(const NlsState& s, double x);
cplx derivative_at(const NlsState& s, double x);

// Same functionals as the loop invariants, with the mean mode included.
loop_sampler::InvariantReport invariants(const NlsState& s);

// One Strang step: half linear (c_k *= e^{-i k^2 h/2}), full nonlinear point
// phase u *= e^{-i beta |u|^2 h} on the alias-free quartic grid followed by
// projection back to |k| <= n, half linear.
void split_step(NlsState& s, double h);

// steps * split_step with invariant tracking. The optional observer fires
// after every step with the current state.
DriftReport evolve(NlsState& s, double h, int steps,
                   const std::function<void(const NlsState&)>& observer = {});

// Pointwise fields entering the moving-frame coefficients, all on the
// alias-free quartic grid. u_t = i u_xx - i beta |u|^2 u is evaluated
// spectrally; sigma_t = Im(conj(u) u_t) / (|u|^2 + eps^2);
// mu = -sigma_t - beta kappa^2. kappa_x differentiates the sampled |u|
// spectrally (Nyquist mode dropped), since |u| itself is not band-limited.
struct TimeDerivativeFields {
  int grid_size = 0;
  std::vector<cplx> u;
  std::vector<cplx> u_t;
  std::vector<double> sigma_t;
  std::vector<double> kappa;
  std::vector<double> kappa_x;
  std::vector<double> mu;
};

TimeDerivativeFields time_derivative_fields(const NlsState& s, double eps);

}  // namespace loopframe::nls_flow
