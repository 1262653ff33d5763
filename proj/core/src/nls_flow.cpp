#include "loopframe/nls_flow.hpp"

#include "loopframe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loopframe::nls_flow {

NlsState::NlsState(int n, double beta) : n_(n), beta_(beta) {
  if (n < 1) throw std::invalid_argument("NlsState: need n >= 1");
  coeff_.assign(2 * n + 1, cplx(0.0, 0.0));
}

cplx NlsState::c(int k) const {
  if (k < -n_ || k > n_)
    throw std::out_of_range("NlsState: mode index outside |k| <= n");
  return coeff_[k + n_];
}

void NlsState::set(int k, cplx v) {
  if (k < -n_ || k > n_)
    throw std::out_of_range("NlsState: mode index outside |k| <= n");
  coeff_[k + n_] = v;
}

NlsState from_loop(const loop_sampler::LoopSample& s, double beta) {
  NlsState out(s.modes(), beta);
  for (int j = 1; j <= s.modes(); ++j) {
    out.set(j, s.c(j));
    out.set(-j, s.c(-j));
  }
  return out;
}

std::vector<cplx> evaluate_field(const NlsState& s, int M) {
  return spectral::synthesize(s.centered(), s.modes(), M);
}

cplx evaluate_at(const NlsState& s, double x) {
  cplx acc(0.0, 0.0);
  const int n = s.modes();
  for (int k = -n; k <= n; ++k)
    acc += s.centered()[k + n] * std::polar(1.0, k * x);
  return acc;
}

cplx derivative_at(const NlsState& s, double x) {
  cplx acc(0.0, 0.0);
  const int n = s.modes();
  for (int k = -n; k <= n; ++k)
    acc += cplx(0.0, static_cast<double>(k)) * s.centered()[k + n] *
           std::polar(1.0, k * x);
  return acc;
}

loop_sampler::InvariantReport invariants(const NlsState& s) {
  loop_sampler::InvariantReport r;
  const int n = s.modes();
  double quad = 0.0;
  for (int k = -n; k <= n; ++k) {
    double a = std::norm(s.centered()[k + n]);
    r.h1 += a;
    r.h2 -= 0.5 * k * a;
    quad += 0.5 * static_cast<double>(k) * k * a;
  }
  const int M = spectral::quartic_grid_size(n);
  auto u = evaluate_field(s, M);
  double quart = 0.0;
  for (const cplx& v : u) {
    double a = std::norm(v);
    quart += a * a;
  }
  r.h3 = quad + 0.25 * s.beta() * quart / M;
  return r;
}

namespace {

void half_linear(NlsState& s, double h) {
  const int n = s.modes();
  for (int k = -n; k <= n; ++k) {
    double phase = -0.5 * static_cast<double>(k) * k * h;
    s.set(k, s.c(k) * std::polar(1.0, phase));
  }
}

void full_nonlinear(NlsState& s, double h) {
  const int n = s.modes();
  const int M = spectral::quartic_grid_size(n);
  auto u = evaluate_field(s, M);
  for (cplx& v : u) v *= std::polar(1.0, -s.beta() * std::norm(v) * h);
  auto modes = spectral::analyze_modes(u, n);
  for (int k = -n; k <= n; ++k) s.set(k, modes[k + n]);
}

}  // namespace

void split_step(NlsState& s, double h) {
  half_linear(s, h);
  full_nonlinear(s, h);
  half_linear(s, h);
  s.advance_time(h);
}

DriftReport evolve(NlsState& s, double h, int steps,
                   const std::function<void(const NlsState&)>& observer) {
  if (steps < 0) throw std::invalid_argument("evolve: negative step count");
  auto first = invariants(s);
  DriftReport rep;
  rep.h1_initial = first.h1;
  rep.h2_initial = first.h2;
  rep.h3_initial = first.h3;
  for (int i = 0; i < steps; ++i) {
    split_step(s, h);
    auto inv = invariants(s);
    rep.h1_drift = std::max(rep.h1_drift, std::abs(inv.h1 - first.h1));
    rep.h2_drift = std::max(rep.h2_drift, std::abs(inv.h2 - first.h2));
    rep.h3_drift = std::max(rep.h3_drift, std::abs(inv.h3 - first.h3));
    if (observer) observer(s);
  }
  rep.h1_rel_drift = first.h1 == 0.0 ? 0.0 : rep.h1_drift / std::abs(first.h1);
  return rep;
}

TimeDerivativeFields time_derivative_fields(const NlsState& s, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("time_derivative_fields: eps must be positive");
  const int n = s.modes();
  const int M = spectral::quartic_grid_size(n);
  TimeDerivativeFields out;
  out.grid_size = M;
  out.u = evaluate_field(s, M);

  // i u_xx: modes -i k^2 c_k.
  std::vector<cplx> lap(2 * n + 1);
  for (int k = -n; k <= n; ++k)
    lap[k + n] = cplx(0.0, -static_cast<double>(k) * k) * s.centered()[k + n];
  auto iuxx = spectral::synthesize(lap, n, M);

  out.u_t.resize(M);
  out.sigma_t.resize(M);
  out.kappa.resize(M);
  out.mu.resize(M);
  const double beta = s.beta();
  for (int m = 0; m < M; ++m) {
    const cplx um = out.u[m];
    const double a2 = std::norm(um);
    out.u_t[m] = iuxx[m] - cplx(0.0, beta * a2) * um;
    out.sigma_t[m] = std::imag(std::conj(um) * out.u_t[m]) / (a2 + eps * eps);
    out.kappa[m] = std::sqrt(a2);
    out.mu[m] = -out.sigma_t[m] - beta * a2;
  }

  // Spectral derivative of the sampled kappa; the Nyquist bin of an even grid
  // carries no usable derivative information and is zeroed.
  std::vector<cplx> kgrid(M);
  for (int m = 0; m < M; ++m) kgrid[m] = cplx(out.kappa[m], 0.0);
  auto khat = spectral::dft_forward(kgrid);
  for (int m = 0; m < M; ++m) {
    int k = m <= M / 2 ? m : m - M;
    if (2 * std::abs(k) == M) k = 0;
    khat[m] *= cplx(0.0, static_cast<double>(k)) / static_cast<double>(M);
  }
  auto kx = spectral::dft_backward(khat);
  out.kappa_x.resize(M);
  for (int m = 0; m < M; ++m) out.kappa_x[m] = std::real(kx[m]);
  return out;
}

}  // namespace loopframe::nls_flow
