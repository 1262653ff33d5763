#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopframe/partition_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

using namespace loopframe::partition_kernel;

TEST_CASE("partition counts follow A000041") {
  const int counts[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42,
                        56, 77, 101, 135, 176, 231, 297, 385, 490, 627};
  for (int k = 1; k <= 20; ++k) {
    auto ps = enumerate_partitions(k);
    CHECK(static_cast<int>(ps.size()) == counts[k - 1]);
    for (const auto& p : ps) {
      CHECK(p.valid());
      CHECK(p.weight() == k);
    }
  }
}

TEST_CASE("partitions arrive in descending lexicographic order") {
  auto ps = enumerate_partitions(4);
  REQUIRE(ps.size() == 5);
  CHECK(ps[0].rows == std::vector<int>{4});
  CHECK(ps[1].rows == std::vector<int>{3, 1});
  CHECK(ps[2].rows == std::vector<int>{2, 2});
  CHECK(ps[3].rows == std::vector<int>{2, 1, 1});
  CHECK(ps[4].rows == std::vector<int>{1, 1, 1, 1});
  for (int k = 1; k <= 12; ++k) {
    auto all = enumerate_partitions(k);
    for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].rows > all[i].rows);
  }
}

TEST_CASE("enumerate_partitions range") {
  CHECK_THROWS(enumerate_partitions(0));
  CHECK_THROWS(enumerate_partitions(21));
}

TEST_CASE("gaussian even moments are the double factorials") {
  CHECK(gaussian_even_moment(0) == 1);
  CHECK(gaussian_even_moment(1) == 1);
  CHECK(gaussian_even_moment(2) == 3);
  CHECK(gaussian_even_moment(3) == 15);
  CHECK(gaussian_even_moment(4) == 105);
  CHECK(gaussian_even_moment(10) == cpp_int("654729075"));
  // (2m-1)!! satisfies the moment recurrence; exactness up to m = 30.
  for (int m = 1; m <= 30; ++m)
    CHECK(gaussian_even_moment(m) == (2 * m - 1) * gaussian_even_moment(m - 1));
  CHECK(gaussian_even_moment(30) ==
        cpp_int("29215606371473169285018060091249259296875"));
  CHECK_THROWS(gaussian_even_moment(-1));
  CHECK_THROWS(gaussian_even_moment(31));
}

namespace {

// Brute-force reference: all rowwise splits left + right = 2 rows with both
// sides summing to the weight.
int count_even_decompositions_brute(const std::vector<int>& rows) {
  int target = 0;
  for (int r : rows) target += r;
  int count = 0;
  std::function<void(size_t, int)> rec = [&](size_t i, int sum) {
    if (sum > target) return;
    if (i == rows.size()) {
      if (sum == target) ++count;
      return;
    }
    for (int l = 0; l <= 2 * rows[i]; ++l) rec(i + 1, sum + l);
  };
  rec(0, 0);
  return count;
}

}  // namespace

TEST_CASE("even decompositions match brute force and ignore padding") {
  const std::vector<std::vector<int>> diagrams = {
      {1}, {2}, {2, 1}, {3, 2}, {2, 2, 1}, {4, 3, 2, 1}, {5}};
  for (const auto& rows : diagrams) {
    Partition p{rows};
    const int brute = count_even_decompositions_brute(rows);
    for (int pad : {0, 1, 3}) {
      auto ds = enumerate_even_decompositions(p, pad);
      // Zero rows admit only the zero split, so the count is padding-free.
      CHECK(static_cast<int>(ds.size()) == brute);
      const size_t expected_rows =
          rows.size() + static_cast<size_t>(std::min(pad, p.weight()));
      for (const auto& d : ds) {
        CHECK(d.valid());
        REQUIRE(d.rows.size() == expected_rows);
        int wl = 0, wr = 0;
        for (size_t i = 0; i < d.rows.size(); ++i) {
          CHECK(d.left[i] + d.right[i] == 2 * d.rows[i]);
          CHECK(d.left[i] >= 0);
          CHECK(d.right[i] >= 0);
          wl += d.left[i];
          wr += d.right[i];
        }
        CHECK(wl == p.weight());
        CHECK(wr == p.weight());
        CHECK(d.odd_rows_left() == d.odd_rows_right());
      }
    }
  }
}

TEST_CASE("k = 1 expansion is diagonal in the variances") {
  auto terms = assemble_jk(1, {0.75, 0.5});
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].bra == std::map<int, int>{{0, 1}});
  CHECK(terms[0].ket == std::map<int, int>{{0, 1}});
  CHECK(terms[0].coefficient == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(terms[1].bra == std::map<int, int>{{1, 1}});
  CHECK(terms[1].ket == std::map<int, int>{{1, 1}});
  CHECK(terms[1].coefficient == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("k = 2 diagonal entries carry the fourth moment") {
  const std::vector<double> alphas = {1.0, 0.5, 0.25};
  auto terms = assemble_jk(2, alphas);
  for (size_t j = 0; j < alphas.size(); ++j) {
    std::map<int, int> twice = {{static_cast<int>(j), 2}};
    bool found = false;
    for (const auto& t : terms)
      if (t.bra == twice && t.ket == twice) {
        found = true;
        CHECK(t.coefficient ==
              doctest::Approx(3.0 * alphas[j] * alphas[j]).epsilon(1e-14));
      }
    CHECK(found);
  }
}

namespace {

// Counting oracle: multisets are encoded as sorted index vectors; a term
// exists iff the combined index counts are all even.
int count_terms_brute(int k, int basis) {
  std::vector<std::vector<int>> multisets;
  std::vector<int> cur(k, 0);
  std::function<void(int, int)> gen = [&](int pos, int lo) {
    if (pos == k) {
      multisets.push_back(cur);
      return;
    }
    for (int v = lo; v < basis; ++v) {
      cur[pos] = v;
      gen(pos + 1, v);
    }
  };
  gen(0, 0);
  int count = 0;
  for (const auto& b : multisets)
    for (const auto& kk : multisets) {
      std::vector<int> deg(basis, 0);
      for (int v : b) ++deg[v];
      for (int v : kk) ++deg[v];
      bool even = true;
      for (int d : deg) even = even && (d % 2 == 0);
      if (even) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("term count matches the brute-force pairing count") {
  for (int k = 1; k <= 4; ++k)
    for (int basis = 1; basis <= 4; ++basis) {
      std::vector<double> alphas(basis, 0.5);
      CHECK(static_cast<int>(assemble_jk(k, alphas).size()) ==
            count_terms_brute(k, basis));
    }
}

TEST_CASE("terms come out deduplicated in a fixed canonical order") {
  auto terms = assemble_jk(3, {1.0, 0.5, 0.25, 0.125});
  // The canonical key is the bra (index, multiplicity) sequence, a separator,
  // then the ket sequence.
  auto key = [](const DensityTerm& t) {
    std::vector<std::pair<int, int>> v(t.bra.begin(), t.bra.end());
    v.emplace_back(-1, -1);
    v.insert(v.end(), t.ket.begin(), t.ket.end());
    return v;
  };
  for (size_t i = 1; i < terms.size(); ++i)
    CHECK(key(terms[i - 1]) < key(terms[i]));  // strict: no duplicates either
  auto again = assemble_jk(3, {1.0, 0.5, 0.25, 0.125});
  REQUIRE(again.size() == terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    CHECK(again[i].bra == terms[i].bra);
    CHECK(again[i].ket == terms[i].ket);
    CHECK(again[i].coefficient == terms[i].coefficient);
  }
}

TEST_CASE("coefficients agree with direct Monte Carlo") {
  const std::vector<double> alphas = {1.0, 0.5, 0.25};
  struct Probe {
    int k;
    std::map<int, int> bra, ket;
    double rel_tol;
  };
  // Tolerances are 4 sigma of the estimator at 4e6 samples.
  const std::vector<Probe> probes = {
      {2, {{0, 2}}, {{0, 2}}, 0.02},
      {2, {{0, 1}, {1, 1}}, {{0, 1}, {1, 1}}, 0.02},
      {2, {{1, 2}}, {{0, 2}}, 0.03},
      {3, {{0, 3}}, {{0, 3}}, 0.04},
      {3, {{0, 2}, {2, 1}}, {{2, 1}, {0, 2}}, 0.05},
  };
  auto terms2 = assemble_jk(2, alphas);
  auto terms3 = assemble_jk(3, alphas);
  for (const auto& pr : probes) {
    const auto& terms = pr.k == 2 ? terms2 : terms3;
    double coeff = 0.0;
    bool found = false;
    for (const auto& t : terms)
      if (t.bra == pr.bra && t.ket == pr.ket) {
        coeff = t.coefficient;
        found = true;
      }
    REQUIRE(found);
    double mc = jk_monte_carlo_oracle(pr.k, alphas, pr.bra, pr.ket, 4000000, 99);
    CHECK(mc == doctest::Approx(coeff).epsilon(pr.rel_tol));
  }
}

TEST_CASE("absent parity pairs really vanish in Monte Carlo") {
  const std::vector<double> alphas = {1.0, 0.5};
  // bra {0,0}, ket {0,1}: index 1 appears once, so the term must be absent.
  auto terms = assemble_jk(2, alphas);
  std::map<int, int> bra = {{0, 2}}, ket = {{0, 1}, {1, 1}};
  for (const auto& t : terms) CHECK(!(t.bra == bra && t.ket == ket));
  double mc = jk_monte_carlo_oracle(2, alphas, bra, ket, 4000000, 5);
  CHECK(std::abs(mc) < 0.01);
}

TEST_CASE("monte carlo oracle is reproducible") {
  const std::vector<double> alphas = {1.0, 0.5};
  std::map<int, int> d = {{0, 2}};
  double a = jk_monte_carlo_oracle(2, alphas, d, d, 100000, 7);
  double b = jk_monte_carlo_oracle(2, alphas, d, d, 100000, 7);
  CHECK(a == b);
}
