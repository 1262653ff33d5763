#include "loopframe/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace loopframe::spectral {

namespace {

// Plan creation is the only non-reentrant part of FFTW; executions run on
// caller-owned buffers via fftw_execute_dft. FFTW_ESTIMATE keeps the chosen
// algorithm independent of runtime timings, which run-to-run determinism needs.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  void execute(std::vector<cplx>& data, int sign) {
    const int M = static_cast<int>(data.size());
    fftw_plan plan = nullptr;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto key = std::make_pair(M, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<cplx> probe(M);
        auto* p = reinterpret_cast<fftw_complex*>(probe.data());
        plan = fftw_plan_dft_1d(M, p, p, sign, FFTW_ESTIMATE);
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    auto* d = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, d, d);
  }

 private:
  PlanCache() = default;
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace

int quartic_grid_size(int n) {
  if (n < 0) throw std::invalid_argument("quartic_grid_size: n < 0");
  int M = 1;
  while (M < 4 * n + 1) M <<= 1;
  return M;
}

std::vector<cplx> dft_forward(const std::vector<cplx>& in) {
  std::vector<cplx> out = in;
  if (!out.empty()) PlanCache::instance().execute(out, FFTW_FORWARD);
  return out;
}

std::vector<cplx> dft_backward(const std::vector<cplx>& in) {
  std::vector<cplx> out = in;
  if (!out.empty()) PlanCache::instance().execute(out, FFTW_BACKWARD);
  return out;
}

std::vector<cplx> synthesize(const std::vector<cplx>& centered, int n, int M) {
  if (M < 1) throw std::invalid_argument("synthesize: grid size < 1");
  if (static_cast<int>(centered.size()) != 2 * n + 1)
    throw std::invalid_argument("synthesize: expected 2n+1 centered modes");
  std::vector<cplx> buf(M, cplx(0.0, 0.0));
  for (int j = -n; j <= n; ++j) {
    int k = ((j % M) + M) % M;
    buf[k] += centered[j + n];
  }
  PlanCache::instance().execute(buf, FFTW_BACKWARD);
  return buf;
}

std::vector<cplx> analyze_modes(const std::vector<cplx>& grid, int n) {
  const int M = static_cast<int>(grid.size());
  if (M < 2 * n + 1)
    throw std::invalid_argument("analyze_modes: grid too small for 2n+1 modes");
  std::vector<cplx> buf = grid;
  PlanCache::instance().execute(buf, FFTW_FORWARD);
  std::vector<cplx> centered(2 * n + 1);
  const double inv = 1.0 / M;
  for (int j = -n; j <= n; ++j) {
    int k = ((j % M) + M) % M;
    centered[j + n] = buf[k] * inv;
  }
  return centered;
}

}  // namespace loopframe::spectral
