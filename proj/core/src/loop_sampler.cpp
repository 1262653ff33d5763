#include "loopframe/loop_sampler.hpp"

#include "loopframe/parallel.hpp"
#include "loopframe/spectral.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace loopframe::loop_sampler {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LoopSample::LoopSample(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("LoopSample: need n >= 1");
  coeff_.assign(2 * n + 1, cplx(0.0, 0.0));
}

cplx LoopSample::c(int j) const {
  if (j == 0 || j < -n_ || j > n_)
    throw std::out_of_range("LoopSample: mode index outside 1 <= |j| <= n");
  return coeff_[j + n_];
}

void LoopSample::set(int j, cplx v) {
  if (j == 0 || j < -n_ || j > n_)
    throw std::out_of_range("LoopSample: mode index outside 1 <= |j| <= n");
  coeff_[j + n_] = v;
}

LoopSample sample_wiener_loop(int n, rng::Gaussian& g) {
  LoopSample s(n);
  const double inv_sqrt2 = 0.70710678118654752440;
  for (int j = 1; j <= n; ++j) {
    double gp = g();
    double gm = g();
    cplx z(gp * inv_sqrt2, gm * inv_sqrt2);
    s.set(j, z / static_cast<double>(j));
    s.set(-j, std::conj(z) / static_cast<double>(j));
  }
  return s;
}

std::vector<cplx> evaluate_field(const LoopSample& s, int M) {
  if (M < 1) throw std::invalid_argument("evaluate_field: grid size < 1");
  return spectral::synthesize(s.centered(), s.modes(), M);
}

namespace {

double quartic_grid_mean(const LoopSample& s) {
  const int M = spectral::quartic_grid_size(s.modes());
  auto u = evaluate_field(s, M);
  double acc = 0.0;
  for (const cplx& v : u) {
    double a = std::norm(v);
    acc += a * a;
  }
  return acc / M;
}

}  // namespace

InvariantReport invariants(const LoopSample& s, double beta) {
  InvariantReport r;
  double quad = 0.0;
  for (int j = -s.modes(); j <= s.modes(); ++j) {
    if (j == 0) continue;
    double a = std::norm(s.c(j));
    r.h1 += a;
    r.h2 -= 0.5 * j * a;
    quad += 0.5 * j * j * a;
  }
  r.h3 = quad + 0.25 * beta * quartic_grid_mean(s);
  return r;
}

GibbsEnsemble gibbs_ensemble(int n, std::int64_t count, double lambda, double K,
                             std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("gibbs_ensemble: count < 1");
  if (!(K > 0.0)) throw std::invalid_argument("gibbs_ensemble: ball radius <= 0");
  GibbsEnsemble e;
  e.proposals = count;
  e.lambda = lambda;
  e.ball_radius = K;
  std::vector<double> logw;
  for (std::int64_t i = 0; i < count; ++i) {
    rng::Gaussian g(seed, static_cast<std::uint64_t>(i));
    LoopSample s = sample_wiener_loop(n, g);
    double h1 = 0.0;
    for (int j = 1; j <= n; ++j) h1 += 2.0 * std::norm(s.c(j));
    if (h1 > K) continue;
    double v = quartic_grid_mean(s);
    e.proposal_id.push_back(i);
    e.h1.push_back(h1);
    e.quartic_mean.push_back(v);
    logw.push_back(lambda * v);
    e.samples.push_back(std::move(s));
  }
  if (e.samples.empty())
    throw std::runtime_error("gibbs_ensemble: no proposals retained; ball radius too small");
  e.acceptance = static_cast<double>(e.samples.size()) / static_cast<double>(count);
  double mx = -std::numeric_limits<double>::infinity();
  for (double lw : logw) mx = std::max(mx, lw);
  double z = 0.0;
  for (double lw : logw) z += std::exp(lw - mx);
  e.weights.resize(logw.size());
  double w2 = 0.0;
  for (size_t i = 0; i < logw.size(); ++i) {
    e.weights[i] = std::exp(logw[i] - mx) / z;
    w2 += e.weights[i] * e.weights[i];
  }
  e.ess = 1.0 / w2;
  return e;
}

double tail_bound(int m, double K) {
  if (m < 1) throw std::invalid_argument("tail_bound: m < 1");
  if (!(K > 0.0)) throw std::invalid_argument("tail_bound: K <= 0");
  return std::exp(m - K * static_cast<double>(m) * m / 4.0);
}

double tail_exceedance_frequency(int m, double K, std::int64_t trials, int modes,
                                 std::uint64_t seed, int workers) {
  if (m < 1 || modes < m)
    throw std::invalid_argument("tail_exceedance_frequency: need 1 <= m <= modes");
  if (trials < 1) throw std::invalid_argument("tail_exceedance_frequency: trials < 1");
  if (workers <= 0) workers = parallel::default_workers();
  std::atomic<std::int64_t> hits{0};
  parallel::parallel_for(trials, workers, [&](std::int64_t i) {
    rng::Gaussian g(seed, static_cast<std::uint64_t>(i));
    double acc = 0.0;
    for (int j = m; j <= modes; ++j) {
      double gp = g();
      double gm = g();
      acc += (gp * gp + gm * gm) / (static_cast<double>(j) * j);
    }
    if (acc >= K) hits.fetch_add(1, std::memory_order_relaxed);
  });
  return static_cast<double>(hits.load()) / static_cast<double>(trials);
}

double ball_probability_bound(double K) {
  if (!(K > 0.0)) throw std::invalid_argument("ball_probability_bound: K <= 0");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 199; ++i) {
    double t = i / 400.0;
    double r = kPi * std::sqrt(2.0 * t);
    double b = std::exp(-t * K) * r / std::sin(r);
    best = std::min(best, b);
  }
  return best;
}

cplx pairing_statistic(const LoopSample& s, const std::vector<cplx>& hprime) {
  const int n = s.modes();
  if (static_cast<int>(hprime.size()) != 2 * n + 1)
    throw std::invalid_argument("pairing_statistic: hprime must be centered, 2n+1 long");
  double norm2 = 0.0;
  for (const cplx& v : hprime) norm2 += std::norm(v);
  if (norm2 > 1.0 + 1e-12)
    throw std::invalid_argument("pairing_statistic: hprime norm exceeds 1");
  cplx acc(0.0, 0.0);
  for (int j = -n; j <= n; ++j) {
    if (j == 0) continue;
    acc += std::conj(hprime[j + n]) * s.c(j);
  }
  return acc;
}

}  // namespace loopframe::loop_sampler
