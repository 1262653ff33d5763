#include "loopframe/partition_kernel.hpp"

#include "loopframe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace loopframe::partition_kernel {

int Partition::weight() const {
  int w = 0;
  for (int r : rows) w += r;
  return w;
}

bool Partition::valid() const {
  if (rows.empty()) return false;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] <= 0) return false;
    if (i && rows[i] > rows[i - 1]) return false;
  }
  return true;
}

bool EvenDecomposition::valid() const {
  if (left.size() != rows.size() || right.size() != rows.size()) return false;
  int sl = 0, sr = 0, w = 0;
  for (size_t j = 0; j < rows.size(); ++j) {
    if (left[j] < 0 || right[j] < 0) return false;
    if (left[j] + right[j] != 2 * rows[j]) return false;
    sl += left[j];
    sr += right[j];
    w += rows[j];
  }
  return sl == w && sr == w;
}

int EvenDecomposition::odd_rows_left() const {
  int c = 0;
  for (int v : left) c += v & 1;
  return c;
}

int EvenDecomposition::odd_rows_right() const {
  int c = 0;
  for (int v : right) c += v & 1;
  return c;
}

std::vector<Partition> enumerate_partitions(int k) {
  if (k < 1 || k > 20)
    throw std::invalid_argument("enumerate_partitions: k outside [1,20]");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Depth-first with the largest feasible part first yields descending
  // lexicographic order directly.
  std::function<void(int, int)> rec = [&](int remaining, int cap) {
    if (remaining == 0) {
      out.push_back(Partition{cur});
      return;
    }
    for (int part = std::min(cap, remaining); part >= 1; --part) {
      cur.push_back(part);
      rec(remaining - part, part);
      cur.pop_back();
    }
  };
  rec(k, k);
  return out;
}

cpp_int gaussian_even_moment(int m) {
  if (m < 0 || m > 30)
    throw std::invalid_argument("gaussian_even_moment: m outside [0,30]");
  cpp_int acc = 1;
  for (int i = 1; i <= m; ++i) acc *= 2 * i - 1;
  return acc;
}

std::vector<EvenDecomposition> enumerate_even_decompositions(const Partition& p,
                                                             int maxZeroRows) {
  if (!p.valid())
    throw std::invalid_argument("enumerate_even_decompositions: bad partition");
  if (maxZeroRows < 0)
    throw std::invalid_argument("enumerate_even_decompositions: negative padding");
  const int k = p.weight();
  // Beyond k zero rows no new splits can appear; cap to keep outputs bounded.
  const int pad = std::min(maxZeroRows, k);
  std::vector<int> rows = p.rows;
  rows.insert(rows.end(), pad, 0);

  // Suffix sums of 2*rows bound how much weight the remaining rows can absorb.
  const size_t nrows = rows.size();
  std::vector<int> suffix(nrows + 1, 0);
  for (size_t j = nrows; j-- > 0;) suffix[j] = suffix[j + 1] + 2 * rows[j];

  std::vector<EvenDecomposition> out;
  std::vector<int> left(nrows, 0);
  std::function<void(size_t, int)> rec = [&](size_t j, int remaining) {
    if (j == nrows) {
      if (remaining == 0) {
        EvenDecomposition d;
        d.rows = rows;
        d.left = left;
        d.right.resize(nrows);
        for (size_t t = 0; t < nrows; ++t) d.right[t] = 2 * rows[t] - left[t];
        out.push_back(std::move(d));
      }
      return;
    }
    if (remaining > suffix[j]) return;
    int hi = std::min(2 * rows[j], remaining);
    for (int l = 0; l <= hi; ++l) {
      left[j] = l;
      rec(j + 1, remaining - l);
    }
    left[j] = 0;
  };
  rec(0, k);
  return out;
}

std::vector<DensityTerm> assemble_jk(int k, const std::vector<double>& alphas) {
  if (k < 1) throw std::invalid_argument("assemble_jk: k < 1");
  const int n = static_cast<int>(alphas.size());
  if (n < 1) throw std::invalid_argument("assemble_jk: empty weight list");
  for (double a : alphas)
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("assemble_jk: weights must be finite and positive");

  // Enumerate per-index exponent pairs (b_j, c_j), b_j + c_j even, with
  // sum b = sum c = k. Each admissible pair of multisets corresponds to
  // exactly one doubled diagram (rows 2k_j = b_j + c_j sorted) together with
  // one even decomposition and one assignment of rows to basis indices, so
  // this direct walk produces the combinatorial expansion without duplicates.
  std::vector<DensityTerm> out;
  std::vector<int> bexp(n, 0), cexp(n, 0);
  std::function<void(int, int, int)> rec = [&](int j, int bleft, int cleft) {
    if (j == n) {
      if (bleft == 0 && cleft == 0) {
        DensityTerm term;
        double coeff = 1.0;
        for (int i = 0; i < n; ++i) {
          int tot = bexp[i] + cexp[i];
          if (tot == 0) continue;
          if (bexp[i]) term.bra[i] = bexp[i];
          if (cexp[i]) term.ket[i] = cexp[i];
          int m = tot / 2;
          coeff *= std::pow(alphas[i], m) *
                   gaussian_even_moment(m).convert_to<double>();
        }
        term.coefficient = coeff;
        out.push_back(std::move(term));
      }
      return;
    }
    // Remaining indices can absorb anything, so only the parity constraint
    // and the running sums prune here.
    for (int b = 0; b <= bleft; ++b)
      for (int c = (b & 1); c <= cleft; c += 2) {
        bexp[j] = b;
        cexp[j] = c;
        rec(j + 1, bleft - b, cleft - c);
      }
    bexp[j] = cexp[j] = 0;
  };
  rec(0, k, k);

  std::sort(out.begin(), out.end(), [](const DensityTerm& x, const DensityTerm& y) {
    auto key = [](const DensityTerm& t) {
      std::vector<std::pair<int, int>> v(t.bra.begin(), t.bra.end());
      v.emplace_back(-1, -1);
      v.insert(v.end(), t.ket.begin(), t.ket.end());
      return v;
    };
    return key(x) < key(y);
  });
  return out;
}

double jk_monte_carlo_oracle(int k, const std::vector<double>& alphas,
                             const std::map<int, int>& bra,
                             const std::map<int, int>& ket,
                             std::int64_t samples, std::uint64_t seed) {
  if (samples < 100000)
    throw std::invalid_argument("jk_monte_carlo_oracle: need >= 1e5 samples");
  const int n = static_cast<int>(alphas.size());
  std::vector<int> expo(n, 0);
  int btot = 0, ktot = 0;
  double alpha_product = 1.0;
  auto absorb = [&](const std::map<int, int>& side, int& tot) {
    for (auto [j, m] : side) {
      if (j < 0 || j >= n)
        throw std::invalid_argument("jk_monte_carlo_oracle: index out of basis");
      if (m <= 0) throw std::invalid_argument("jk_monte_carlo_oracle: bad multiplicity");
      expo[j] += m;
      tot += m;
    }
  };
  absorb(bra, btot);
  absorb(ket, ktot);
  if (btot != k || ktot != k)
    throw std::invalid_argument("jk_monte_carlo_oracle: sides must have size k");
  for (int j = 0; j < n; ++j)
    if (expo[j]) alpha_product *= std::pow(alphas[j], expo[j] / 2.0);

  // Only indices with a nonzero exponent matter for the product; drawing all
  // n normals per sample keeps the estimator faithful to the stated sampling
  // scheme at negligible cost for desk-scale n.
  rng::Gaussian g(seed, 0);
  double mean = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      double x = g();
      for (int e = 0; e < expo[j]; ++e) prod *= x;
    }
    mean += (prod - mean) / static_cast<double>(s + 1);
  }
  return mean * alpha_product;
}

}  // namespace loopframe::partition_kernel
