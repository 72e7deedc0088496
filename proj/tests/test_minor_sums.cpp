#include "doctest.h"

#include <cmath>
#include <vector>

#include "coneray/error.hpp"
#include "coneray/minor_sums.hpp"
#include "coneray/sphere_opt.hpp"

using namespace coneray;

namespace {

// Brute-force oracle, written independently of the library routine: explicit
// subset enumeration with its own little determinant.
double naive_det(const std::vector<double>& m, int n) {
  if (n == 0) return 1.0;
  if (n == 1) return m[0];
  double acc = 0.0;
  std::vector<double> sub((n - 1) * (n - 1));
  for (int j = 0; j < n; ++j) {
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        sub[(r - 1) * (n - 1) + cc++] = m[r * n + c];
      }
    }
    acc += ((j % 2 == 0) ? 1.0 : -1.0) * m[j] * naive_det(sub, n - 1);
  }
  return acc;
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // lexicographic recursion
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> complement(const std::vector<int>& s, int n) {
  std::vector<int> out;
  size_t p = 0;
  for (int i = 0; i < n; ++i) {
    if (p < s.size() && s[p] == i) {
      ++p;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<double> pick(const SymMatrix& m, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  std::vector<double> out(rows.size() * cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out[i * cols.size() + j] = m.at(rows[i], cols[j]);
  return out;
}

double naive_minor_sum(const SymMatrix& a, const SymMatrix& b, int k) {
  const int n = a.n;
  double acc = 0.0;
  long count = 0;
  for (const auto& rows : subsets(n, k))
    for (const auto& cols : subsets(n, k)) {
      int sgn = 0;
      for (int r : rows) sgn += r;
      for (int c : cols) sgn += c;
      auto rc = complement(rows, n), cc = complement(cols, n);
      acc += ((sgn % 2 == 0) ? 1.0 : -1.0) *
             naive_det(pick(b, rows, cols), k) *
             naive_det(pick(a, rc, cc), n - k);
      ++count;
    }
  long binom = 1;
  for (int i = 0; i < k; ++i) binom = binom * (n - i) / (i + 1);
  (void)count;
  return acc / static_cast<double>(binom);
}

SymMatrix random_sym(Rng& rng, int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, rng.gaussian());
  return m;
}

SymMatrix random_psd(Rng& rng, int n) {
  SymMatrix m = random_sym(rng, n);
  SymMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += m.at(k, i) * m.at(k, j);
      g.set(i, j, s);
    }
  return g;
}

}  // namespace

TEST_CASE("minor_sum matches the brute-force oracle") {
  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng.raw() % 3);
    SymMatrix a = random_sym(rng, n), b = random_sym(rng, n);
    for (int k = 1; k <= n; ++k) {
      double lib = minor_sum(a, b, k);
      double ref = naive_minor_sum(a, b, k);
      CHECK(std::abs(lib - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("minor_sum endpoints: k = n is det B, k = 1 is the cofactor pairing") {
  Rng rng(62);
  SymMatrix a = random_sym(rng, 3), b = random_sym(rng, 3);
  CHECK(minor_sum(a, b, 3) == doctest::Approx(naive_det(pick(b, {0, 1, 2}, {0, 1, 2}), 3))
                                  .epsilon(1e-10));

  // k = 1: (1/3) sum_ij b_ij cof(A)_ij.
  double acc = 0;
  std::vector<int> all = {0, 1, 2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto rc = complement({i}, 3), cc = complement({j}, 3);
      double cof = (((i + j) % 2 == 0) ? 1.0 : -1.0) * naive_det(pick(a, rc, cc), 2);
      acc += b.at(i, j) * cof;
    }
  CHECK(minor_sum(a, b, 1) == doctest::Approx(acc / 3.0).epsilon(1e-10));
}

TEST_CASE("generalized Laplace: minor_sum(A, A, k) = det A for every k") {
  Rng rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng.raw() % 3);
    SymMatrix a = random_sym(rng, n);
    double det = naive_det(pick(a, subsets(n, n)[0], subsets(n, n)[0]), n);
    for (int k = 1; k <= n; ++k)
      CHECK(minor_sum(a, a, k) == doctest::Approx(det).epsilon(1e-9));
  }
}

TEST_CASE("minor monotonicity for ordered PSD pairs") {
  // With A >= B >= 0 the averaged minor sums decrease as the B-block grows:
  // minor_sum(a, b, m) <= minor_sum(a, b, k) for k < m.
  Rng rng(64);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + static_cast<int>(rng.raw() % 2);
    SymMatrix b = random_psd(rng, n);
    SymMatrix bump = random_psd(rng, n);
    SymMatrix a(n);
    for (int i = 0; i < n * n; ++i) a.a[i] = b.a[i] + bump.a[i];
    std::vector<double> ms(n + 1);
    for (int k = 1; k <= n; ++k) ms[k] = minor_sum(a, b, k);
    double scale = std::max(1.0, std::abs(ms[1]));
    for (int k = 1; k <= n; ++k)
      for (int m = k + 1; m <= n; ++m) CHECK(ms[m] <= ms[k] + 1e-9 * scale);
  }
}

TEST_CASE("lemma41_check: chain holds for ordered pairs and names its values") {
  Rng rng(65);
  for (int trial = 0; trial < 100; ++trial) {
    SymMatrix b = random_psd(rng, 3);
    SymMatrix bump = random_psd(rng, 3);
    SymMatrix a(3);
    for (int i = 0; i < 9; ++i) a.a[i] = b.a[i] + bump.a[i];
    ChainResult r = lemma41_check(a, b);
    CHECK(r.ok);
    for (bool step : r.nondecreasing) CHECK(step);
    // Endpoints are 3 det B and 3 det A.
    CHECK(r.values[0] == doctest::Approx(3.0 * minor_sum(a, b, 3)).epsilon(1e-9));
    CHECK(r.values[3] == doctest::Approx(3.0 * minor_sum(b, a, 3)).epsilon(1e-9));
    // Middle terms are the two cofactor pairings.
    CHECK(r.values[1] == doctest::Approx(3.0 * minor_sum(b, a, 1)).epsilon(1e-9));
    CHECK(r.values[2] == doctest::Approx(3.0 * minor_sum(a, b, 1)).epsilon(1e-9));
  }
}

TEST_CASE("lemma41_check rejects unordered input") {
  SymMatrix a(3), b(3);
  for (int i = 0; i < 3; ++i) a.set(i, i, 1.0);
  b.set(0, 0, 2.0);  // B has a larger corner than A, so A - B is not PSD
  CHECK_THROWS_AS(lemma41_check(a, b), Error);
  try {
    lemma41_check(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PreconditionViolated);
  }

  SymMatrix neg(3);
  neg.set(0, 0, -1.0);
  CHECK_THROWS_AS(lemma41_check(a, neg), Error);
}

TEST_CASE("minor_sum argument validation") {
  SymMatrix a(3), b(2);
  CHECK_THROWS_AS(minor_sum(a, b, 1), Error);
  SymMatrix c(3);
  CHECK_THROWS_AS(minor_sum(a, c, 0), Error);
  CHECK_THROWS_AS(minor_sum(a, c, 4), Error);
}
