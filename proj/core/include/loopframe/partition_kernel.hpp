#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace loopframe::partition_kernel {

using boost::multiprecision::cpp_int;

// Rows of a Young diagram: positive parts, non-increasing left to right.
struct Partition {
  std::vector<int> rows;

  int weight() const;  // sum of parts
  bool valid() const;
};

// Splits the doubled diagram rowwise: left[j] + right[j] = 2 * rows[j], with
// both sides summing to weight(). Rows may include zero-padding; padded rows
// force left = right = 0 there.
struct EvenDecomposition {
  std::vector<int> rows;  // doubled-parent rows incl. padding
  std::vector<int> left;
  std::vector<int> right;

  bool valid() const;
  // Rowwise parity matches, so both sides carry equally many odd rows.
  int odd_rows_left() const;
  int odd_rows_right() const;
};

// One entry of the k-point expansion: coefficient times the elementary tensor
// |phi^bra><phi^ket|, addressed by basis-index -> multiplicity maps.
struct DensityTerm {
  std::map<int, int> bra;
  std::map<int, int> ket;
  double coefficient = 0.0;
};

// All partitions of k, lexicographically descending: (k) first, (1,...,1) last.
// Valid for 1 <= k <= 20.
std::vector<Partition> enumerate_partitions(int k);

// (2m)! / (2^m m!) = (2m-1)!!, the 2m-th moment of a standard Gaussian.
// Exact for 0 <= m <= 30; out of range throws.
cpp_int gaussian_even_moment(int m);

// Every even decomposition of the doubled diagram of p, after padding p with
// maxZeroRows zero rows. Zero rows admit only the zero split, so the count is
// independent of maxZeroRows; padding only lengthens the row vectors.
std::vector<EvenDecomposition> enumerate_even_decompositions(const Partition& p,
                                                             int maxZeroRows);

// Full expansion of the k-point ensemble average over a truncated basis of
// size alphas.size(). Term (bra B, ket K) exists iff B_j + K_j is even for
// every j and both multisets have size k; its coefficient is
//   prod_j alphas[j]^{(B_j+K_j)/2} * prod_j ((B_j+K_j-1)!!).
// Terms are emitted in a canonical order (bra, then ket, lexicographic).
std::vector<DensityTerm> assemble_jk(int k, const std::vector<double>& alphas);

// Direct Monte Carlo estimate of the same matrix entry from u = sum_j
// sqrt(alphas[j]) g_j phi_j with iid standard normals g: the sample mean of
// prod_j g_j^{B_j + K_j} times prod_j alphas[j]^{(B_j+K_j)/2}. Independent of
// the combinatorial path above; used to cross-check coefficients.
double jk_monte_carlo_oracle(int k, const std::vector<double>& alphas,
                             const std::map<int, int>& bra,
                             const std::map<int, int>& ket,
                             std::int64_t samples, std::uint64_t seed);

}  // namespace loopframe::partition_kernel
