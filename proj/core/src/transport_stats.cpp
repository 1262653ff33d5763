#include "loopframe/transport_stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace loopframe::transport_stats {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Extends an analytic CDF to the whole line: 0 left of the support, 1 right
// of it, with the antiderivative continued linearly.
double cdf_at(const AnalyticCdf& f, double t) {
  if (t <= f.lo) return 0.0;
  if (t >= f.hi) return 1.0;
  return clamp01(f.cdf(t));
}

double antiderivative_at(const AnalyticCdf& f, double t) {
  if (t <= f.lo) return f.cdf_antiderivative(f.lo);
  if (t >= f.hi) return f.cdf_antiderivative(f.hi) + (t - f.hi);
  return f.cdf_antiderivative(t);
}

void require_finite_support(const AnalyticCdf& f, const char* who) {
  if (!std::isfinite(f.lo) || !std::isfinite(f.hi) || !(f.hi > f.lo))
    throw std::domain_error(std::string(who) + ": support must be a finite interval");
}

double adaptive_simpson(const std::function<double(double)>& fn, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = fn(a), fm = fn(m), fb = fn(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(fn, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
  for (double v : sorted_)
    if (!std::isfinite(v))
      throw std::invalid_argument("EmpiricalCdf: non-finite sample value");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

AnalyticCdf longitude_reference() {
  AnalyticCdf f;
  f.lo = -kPi;
  f.hi = kPi;
  f.cdf = [](double t) { return (t + kPi) / (2.0 * kPi); };
  f.quantile = [](double p) { return 2.0 * kPi * p - kPi; };
  f.cdf_antiderivative = [](double t) {
    return (t + kPi) * (t + kPi) / (4.0 * kPi);
  };
  return f;
}

AnalyticCdf colatitude_reference() {
  AnalyticCdf f;
  f.lo = 0.0;
  f.hi = kPi;
  f.cdf = [](double t) { return 0.5 * (1.0 - std::cos(t)); };
  f.quantile = [](double p) { return std::acos(1.0 - 2.0 * clamp01(p)); };
  f.cdf_antiderivative = [](double t) { return 0.5 * (t - std::sin(t)); };
  return f;
}

double w1_cdf(const EmpiricalCdf& f, const EmpiricalCdf& g) {
  const auto& a = f.sorted();
  const auto& b = g.sorted();
  // Sweep the merged jump set; both CDFs are constant between jumps.
  double total = 0.0;
  size_t i = 0, j = 0;
  double prev = std::min(a.front(), b.front());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() || j < b.size()) {
    double next;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      next = a[i];
    else
      next = b[j];
    total += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) *
             (next - prev);
    while (i < a.size() && a[i] == next) ++i;
    while (j < b.size() && b[j] == next) ++j;
    prev = next;
  }
  return total;
}

double w1_cdf(const EmpiricalCdf& f, const AnalyticCdf& g) {
  require_finite_support(g, "w1_cdf");
  const auto& x = f.sorted();
  std::vector<double> cuts;
  cuts.reserve(x.size() + 2);
  cuts.push_back(std::min(g.lo, x.front()));
  for (double v : x) cuts.push_back(v);
  cuts.push_back(g.lo);
  cuts.push_back(g.hi);
  cuts.push_back(std::max(g.hi, x.back()));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double n = static_cast<double>(x.size());
  double total = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    // Empirical value on [a, b); analytic F crosses it at most once.
    const double step = f(a);
    double c = a;
    if (cdf_at(g, a) < step && cdf_at(g, b) > step)
      c = std::clamp(g.quantile(step), a, b);
    else if (cdf_at(g, b) <= step)
      c = b;
    const double ia = antiderivative_at(g, a);
    const double ic = antiderivative_at(g, c);
    const double ib = antiderivative_at(g, b);
    total += (step * (c - a) - (ic - ia)) + ((ib - ic) - step * (b - c));
  }
  return total;
}

double w1_cdf(const AnalyticCdf& f, const AnalyticCdf& g) {
  require_finite_support(f, "w1_cdf");
  require_finite_support(g, "w1_cdf");
  const double lo = std::min(f.lo, g.lo), hi = std::max(f.hi, g.hi);
  return integrate(
      [&](double t) { return std::abs(cdf_at(f, t) - cdf_at(g, t)); }, lo, hi,
      1e-12);
}

double w2_cdf(const EmpiricalCdf& f, const EmpiricalCdf& g) {
  const auto& a = f.sorted();
  const auto& b = g.sorted();
  const std::int64_t n = f.size(), m = g.size();
  // Quantile functions are step functions on a common [0,1); integrate the
  // squared gap over the merged quantile cells.
  double acc = 0.0;
  std::int64_t i = 0, j = 0;
  double p = 0.0;
  while (i < n && j < m) {
    const double pi_next = static_cast<double>(i + 1) / n;
    const double pj_next = static_cast<double>(j + 1) / m;
    const double next = std::min(pi_next, pj_next);
    const double d = a[i] - b[j];
    acc += d * d * (next - p);
    p = next;
    if (pi_next <= next) ++i;
    if (pj_next <= next) ++j;
  }
  return std::sqrt(acc);
}

double w2_cdf(const EmpiricalCdf& f, const AnalyticCdf& g) {
  require_finite_support(g, "w2_cdf");
  // 16-point Gauss-Legendre nodes on [0,1].
  static const double nodes[] = {
      0.0052995325041750333, 0.0277124884633837047, 0.0671843988060841224,
      0.1222977958224984868, 0.1910618777986781147, 0.2709916111713863151,
      0.3591982246103705422, 0.4524937450811812866, 0.5475062549188187134,
      0.6408017753896294578, 0.7290083888286136849, 0.8089381222013218853,
      0.8777022041775015132, 0.9328156011939158776, 0.9722875115366162953,
      0.9947004674958249667};
  static const double weights[] = {
      0.0135762297058770482, 0.0311267619693239468, 0.0475792558412463928,
      0.0623144856277669384, 0.0747979944082883680, 0.0845782596975012679,
      0.0913017075224617919, 0.0947253052275342510, 0.0947253052275342510,
      0.0913017075224617919, 0.0845782596975012679, 0.0747979944082883680,
      0.0623144856277669384, 0.0475792558412463928, 0.0311267619693239468,
      0.0135762297058770482};
  const auto& x = f.sorted();
  const double n = static_cast<double>(x.size());
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pa = static_cast<double>(i) / n;
    const double pb = static_cast<double>(i + 1) / n;
    for (int q = 0; q < 16; ++q) {
      const double p = pa + (pb - pa) * nodes[q];
      const double d = x[i] - g.quantile(p);
      acc += weights[q] * (pb - pa) * d * d;
    }
  }
  return std::sqrt(acc);
}

namespace {

void validate_sphere(const SphereSampleSet& s, const char* who) {
  if (s.theta.size() != s.phi.size())
    throw std::invalid_argument(std::string(who) + ": theta/phi length mismatch");
  if (s.theta.empty())
    throw std::invalid_argument(std::string(who) + ": empty sample set");
  for (size_t i = 0; i < s.theta.size(); ++i) {
    if (!(s.theta[i] >= -kPi - 1e-12) || !(s.theta[i] <= kPi + 1e-12) ||
        !(s.phi[i] >= -1e-12) || !(s.phi[i] <= kPi + 1e-12))
      throw std::invalid_argument(std::string(who) + ": angle outside its range");
  }
}

}  // namespace

SphereW1Bound sphere_w1_bound(const SphereSampleSet& samples) {
  validate_sphere(samples, "sphere_w1_bound");
  const std::int64_t N = static_cast<std::int64_t>(samples.theta.size());
  if (N < 100)
    throw std::invalid_argument("sphere_w1_bound: need at least 100 samples");

  SphereW1Bound out;
  EmpiricalCdf theta_cdf(samples.theta);
  EmpiricalCdf phi_all(samples.phi);
  out.theta_term = w1_cdf(theta_cdf, longitude_reference());
  out.phi_term = w1_cdf(phi_all, colatitude_reference());

  const int B = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(N))));
  out.strips = B;
  std::vector<std::vector<double>> strip_phi(B);
  const double width = 2.0 * kPi / B;
  for (std::int64_t i = 0; i < N; ++i) {
    int b = static_cast<int>(std::floor((samples.theta[i] + kPi) / width));
    b = std::clamp(b, 0, B - 1);
    strip_phi[b].push_back(samples.phi[i]);
  }
  double cond = 0.0;
  for (int b = 0; b < B; ++b) {
    if (strip_phi[b].empty()) continue;  // conditional defaults to the marginal
    EmpiricalCdf strip_cdf(std::move(strip_phi[b]));
    cond += w1_cdf(strip_cdf, phi_all) / B;  // strips have equal F1 measure
  }
  out.conditional_term = cond;
  out.total = out.theta_term + out.phi_term + out.conditional_term;
  return out;
}

double fluctuation_bound(const AnalyticCdf& f, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("fluctuation_bound: N < 1");
  require_finite_support(f, "fluctuation_bound");
  const double integral = integrate(
      [&](double t) {
        const double F = cdf_at(f, t);
        return std::sqrt(std::max(0.0, F * (1.0 - F)));
      },
      f.lo, f.hi, 1e-12);
  return integral / std::sqrt(static_cast<double>(N));
}

double fluctuation_bound(const EmpiricalCdf& f, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("fluctuation_bound: N < 1");
  const auto& x = f.sorted();
  const double n = static_cast<double>(x.size());
  double integral = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    const double F = static_cast<double>(i + 1) / n;
    integral += std::sqrt(F * (1.0 - F)) * (x[i + 1] - x[i]);
  }
  return integral / std::sqrt(static_cast<double>(N));
}

double kolmogorov_tail(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  // Below this point the tail is 1 to double precision and the 20-term
  // alternating series has not yet converged.
  if (lambda < 0.18) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k & 1) ? term : -term;
  }
  return clamp01(2.0 * sum);
}

KsResult ks_test(const std::vector<double>& samples, const AnalyticCdf& f0) {
  if (samples.size() < 10)
    throw std::invalid_argument("ks_test: need at least 10 samples");
  std::vector<double> x = samples;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double F = cdf_at(f0, x[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - F,
                             F - static_cast<double>(i) / n));
  }
  KsResult r;
  r.d = d;
  r.lambda = std::sqrt(n) * d;
  r.p = kolmogorov_tail(r.lambda);
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 10 || b.size() < 10)
    throw std::invalid_argument("ks_two_sample: need at least 10 samples per side");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  KsResult r;
  r.d = d;
  r.lambda = std::sqrt(na * nb / (na + nb)) * d;
  r.p = kolmogorov_tail(r.lambda);
  return r;
}

Chi2Result chi2_independence(const SphereSampleSet& samples, int binsTheta,
                             int binsPhi) {
  validate_sphere(samples, "chi2_independence");
  if (binsTheta < 2 || binsPhi < 2)
    throw std::invalid_argument("chi2_independence: need at least 2 bins per axis");
  const std::int64_t N = static_cast<std::int64_t>(samples.theta.size());
  const AnalyticCdf G1 = colatitude_reference();

  int r = binsTheta, c = binsPhi;
  for (;;) {
    // Equal-measure edges under F1 x G1: theta uniform, phi via the quantile.
    std::vector<std::int64_t> counts(static_cast<size_t>(r) * c, 0);
    const double width = 2.0 * kPi / r;
    for (std::int64_t i = 0; i < N; ++i) {
      int bt = std::clamp(static_cast<int>(std::floor((samples.theta[i] + kPi) / width)),
                          0, r - 1);
      const double gp = 0.5 * (1.0 - std::cos(samples.phi[i]));
      int bp = std::clamp(static_cast<int>(std::floor(gp * c)), 0, c - 1);
      ++counts[static_cast<size_t>(bt) * c + bp];
    }
    std::vector<double> row(r, 0.0), col(c, 0.0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        row[i] += counts[static_cast<size_t>(i) * c + j];
        col[j] += counts[static_cast<size_t>(i) * c + j];
      }
    double min_expected = std::numeric_limits<double>::infinity();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        min_expected = std::min(min_expected, row[i] * col[j] / N);
    if (min_expected < 5.0) {
      // Coarsen the finer axis first and retry.
      if (r >= c && r > 2)
        r = std::max(2, r / 2);
      else if (c > 2)
        c = std::max(2, c / 2);
      else
        throw std::runtime_error(
            "chi2_independence: expected counts below 5 even at 2x2 binning");
      continue;
    }
    double stat = 0.0;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        const double e = row[i] * col[j] / N;
        if (e > 0.0) {
          const double d = counts[static_cast<size_t>(i) * c + j] - e;
          stat += d * d / e;
        }
      }
    Chi2Result out;
    out.stat = stat;
    out.dof = (r - 1) * (c - 1);
    out.bins_theta = r;
    out.bins_phi = c;
    boost::math::chi_squared dist(out.dof);
    out.p = boost::math::cdf(boost::math::complement(dist, stat));
    return out;
  }
}

double concentration_probe(const std::vector<double>& replica_values,
                           double per_replica_n) {
  const size_t R = replica_values.size();
  if (R < 100)
    throw std::invalid_argument("concentration_probe: need at least 100 replicas");
  if (!(per_replica_n > 0))
    throw std::invalid_argument("concentration_probe: sample count must be positive");
  double mean = 0.0;
  for (double v : replica_values) mean += v;
  mean /= static_cast<double>(R);
  std::vector<double> dev(R);
  double dmax = 0.0;
  for (size_t i = 0; i < R; ++i) {
    dev[i] = std::abs(replica_values[i] - mean);
    dmax = std::max(dmax, dev[i]);
  }
  if (dmax == 0.0) return std::numeric_limits<double>::infinity();
  double alpha = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    const double eps = dmax * k / 40.0;
    std::int64_t hits = 0;
    for (double d : dev)
      if (d > eps) ++hits;
    if (hits == 0) continue;
    const double freq = static_cast<double>(hits) / static_cast<double>(R);
    alpha = std::min(alpha, 2.0 * std::log(2.0 / freq) / (per_replica_n * eps * eps));
  }
  return alpha;
}

double holder_estimate(const std::vector<std::vector<cplx>>& fields, double p) {
  if (fields.empty()) throw std::invalid_argument("holder_estimate: no fields");
  if (!(p >= 1.0)) throw std::invalid_argument("holder_estimate: need p >= 1");
  const size_t M = fields.front().size();
  if (M < 256)
    throw std::invalid_argument("holder_estimate: need at least 2^8 grid points");
  for (const auto& f : fields)
    if (f.size() != M)
      throw std::invalid_argument("holder_estimate: ragged field grids");

  std::vector<double> xs, ys;
  for (size_t shift = 1; shift <= M / 8; shift *= 2) {
    double ensemble = 0.0;
    for (const auto& f : fields) {
      double acc = 0.0;
      for (size_t m = 0; m < M; ++m) {
        const double d = std::abs(f[(m + shift) % M] - f[m]);
        acc += std::pow(d, p);
      }
      ensemble += std::pow(acc / static_cast<double>(M), 1.0 / p);
    }
    ensemble /= static_cast<double>(fields.size());
    if (ensemble <= 0.0) continue;  // constant field at this shift
    xs.push_back(std::log(2.0 * kPi * static_cast<double>(shift) / M));
    ys.push_back(std::log(ensemble));
  }
  if (xs.size() < 3) return 1.0;  // no usable increments: smoothest verdict

  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::min(slope, 1.0);
}

}  // namespace loopframe::transport_stats
