#pragma once

#include "loopframe/rng.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace loopframe::loop_sampler {

using cplx = std::complex<double>;

// Truncated Fourier coefficients of a closed loop on the circle. Modes run
// over 1 <= |j| <= n; there is no mean mode. Storage is centered, slot j+n,
// with the middle slot pinned to zero.
class LoopSample {
 public:
  LoopSample() = default;
  explicit LoopSample(int n);

  int modes() const { return n_; }
  cplx c(int j) const;
  void set(int j, cplx v);
  const std::vector<cplx>& centered() const { return coeff_; }

 private:
  int n_ = 0;
  std::vector<cplx> coeff_;  // size 2n+1
};

struct InvariantReport {
  double h1 = 0.0;  // sum |c_j|^2
  double h2 = 0.0;  // -(1/2) sum j |c_j|^2
  double h3 = 0.0;  // (1/2) sum j^2 |c_j|^2 + (beta/4) mean |u|^4
};

struct GibbsEnsemble {
  std::vector<LoopSample> samples;        // retained proposals, in draw order
  std::vector<std::int64_t> proposal_id;  // draw index of each retained sample
  std::vector<double> weights;            // self-normalized, sums to 1
  std::vector<double> h1;                 // per retained sample
  std::vector<double> quartic_mean;  // (1/M) sum |u(theta_m)|^4, dealiased grid
  std::int64_t proposals = 0;
  double acceptance = 0.0;  // retained / proposals
  double ess = 0.0;         // 1 / sum w^2
  double lambda = 0.0;
  double ball_radius = 0.0;
};

// Coefficients c_j = z_j / |j| with z_j = (g_j + i g_{-j})/sqrt(2) and
// z_{-j} = (g_j - i g_{-j})/sqrt(2) built from two standard normals per |j|,
// so E|z_j|^2 = 1 and c_{-j} = conj(c_j). Consumes exactly 2n draws.
LoopSample sample_wiener_loop(int n, rng::Gaussian& g);

// u(theta_m) = sum_j c_j e^{i j theta_m} on the M-point uniform grid.
std::vector<cplx> evaluate_field(const LoopSample& s, int M);

// Quadratic invariants from the spectrum; the quartic part of h3 is a grid
// mean on the alias-free quartic grid (next power of two >= 4n+1).
InvariantReport invariants(const LoopSample& s, double beta);

// Importance sampling against the free loop: proposals outside the ball
// {h1 <= K} are dropped, the rest carry self-normalized weights
// proportional to exp(lambda * quartic_mean). Sample i always uses the rng
// stream (seed, i), so the ensemble is reproducible under any execution
// order. Throws when nothing is retained.
GibbsEnsemble gibbs_ensemble(int n, std::int64_t count, double lambda, double K,
                             std::uint64_t seed);

// exp(m - K m^2 / 4): closed-form bound on the probability that the mode-m
// tail sum_{|j| >= m} g_j^2 / j^2 exceeds K.
double tail_bound(int m, double K);

// Empirical companion of tail_bound: frequency of the event
// sum_{m <= |j| <= modes} g_j^2/j^2 >= K over independent trials. Trial i
// uses stream (seed, i).
double tail_exceedance_frequency(int m, double K, std::int64_t trials, int modes,
                                 std::uint64_t seed, int workers = 0);

// Chernoff-type bound on P[sum_j g_j^2/j^2 > K]: minimum of
// exp(-t K) * pi sqrt(2t) / sin(pi sqrt(2t)) over the pinned grid
// t = i/400, i = 1..199.
double ball_probability_bound(double K);

// <h', u> = sum_j conj(hprime[j]) c_j over 1 <= |j| <= n; hprime is centered
// like LoopSample, must satisfy sum |hprime_j|^2 <= 1.
cplx pairing_statistic(const LoopSample& s, const std::vector<cplx>& hprime);

}  // namespace loopframe::loop_sampler
