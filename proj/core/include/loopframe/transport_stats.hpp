#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace loopframe::transport_stats {

using cplx = std::complex<double>;

// Right-continuous step function of a sorted sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double t) const;
  const std::vector<double>& sorted() const { return sorted_; }
  std::int64_t size() const { return static_cast<std::int64_t>(sorted_.size()); }

 private:
  std::vector<double> sorted_;
};

// Closed-form distribution on a finite interval. The antiderivative of the
// CDF lets |F - const| integrate exactly between sample points, and the
// quantile drives equal-measure binning and quantile coupling.
struct AnalyticCdf {
  double lo = 0.0;
  double hi = 0.0;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  std::function<double(double)> cdf_antiderivative;
};

// Longitude of the uniform sphere measure: F(t) = (t + pi) / (2 pi) on [-pi, pi].
AnalyticCdf longitude_reference();
// Colatitude: G(t) = (1 - cos t) / 2 on [0, pi].
AnalyticCdf colatitude_reference();

// L1 distance between CDFs (the 1-Wasserstein distance on the line).
// Both empirical: exact stair-step sum. Empirical vs analytic: exact
// cell-by-cell integration using the quantile and antiderivative. Analytic
// pairs fall back to adaptive Simpson.
double w1_cdf(const EmpiricalCdf& f, const EmpiricalCdf& g);
double w1_cdf(const EmpiricalCdf& f, const AnalyticCdf& g);
double w1_cdf(const AnalyticCdf& f, const AnalyticCdf& g);

// Quantile-coupled 2-Wasserstein distance.
double w2_cdf(const EmpiricalCdf& f, const EmpiricalCdf& g);
double w2_cdf(const EmpiricalCdf& f, const AnalyticCdf& g);

// Paired angles of points on S^2; theta in [-pi, pi], phi in [0, pi].
struct SphereSampleSet {
  std::vector<double> theta;
  std::vector<double> phi;
};

// Upper bound on the spherical transport distance to the uniform measure:
// longitude marginal term + colatitude marginal term + a conditional term
// that averages, over ceil(N^{1/3}) equal-width theta strips, the distance
// between the strip's phi distribution and the pooled one. Empty strips
// contribute zero (their conditional defaults to the marginal).
struct SphereW1Bound {
  double theta_term = 0.0;
  double phi_term = 0.0;
  double conditional_term = 0.0;
  double total = 0.0;
  int strips = 0;
};
SphereW1Bound sphere_w1_bound(const SphereSampleSet& samples);

// (1/sqrt(N)) * integral of sqrt(F(1-F)) over the support. Supports must be
// finite; the integral diverges otherwise and the call throws.
double fluctuation_bound(const AnalyticCdf& f, std::int64_t N);
double fluctuation_bound(const EmpiricalCdf& f, std::int64_t N);

struct KsResult {
  double d = 0.0;       // sup |F_n - F|
  double lambda = 0.0;  // scaled statistic fed to the tail series
  double p = 0.0;
};

// One-sample Kolmogorov-Smirnov against a reference CDF; exact statistic at
// the jump points, asymptotic p-value.
KsResult ks_test(const std::vector<double>& samples, const AnalyticCdf& f0);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// P[K > lambda] = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 lambda^2}, 20 terms.
double kolmogorov_tail(double lambda);

// Pearson chi-square independence test on a theta x phi contingency table
// with equal-measure bins under the product reference F1 x G1. Bin counts
// are halved (larger side first) until every expected cell count reaches 5;
// running out of cells throws.
struct Chi2Result {
  double stat = 0.0;
  int dof = 0;
  double p = 0.0;
  int bins_theta = 0;
  int bins_phi = 0;
};
Chi2Result chi2_independence(const SphereSampleSet& samples, int binsTheta,
                             int binsPhi);

// Largest alpha with freq(|v - mean| > eps) <= 2 exp(-N alpha eps^2 / 2)
// across a 40-point eps grid up to the largest observed deviation.
// Degenerate (all-equal) replicas return +infinity.
double concentration_probe(const std::vector<double>& replica_values,
                           double per_replica_n);

// Holder exponent of a periodic field from the log-log regression of the
// ensemble-averaged L^p increment norm against dyadic grid shifts. The
// regression is capped at 1 (Lipschitz); needs >= 2^8 grid points.
double holder_estimate(const std::vector<std::vector<cplx>>& fields, double p);

}  // namespace loopframe::transport_stats
