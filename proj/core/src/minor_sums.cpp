#include "coneray/minor_sums.hpp"

#include <cmath>
#include <cstdint>

#include "coneray/error.hpp"

namespace coneray {

namespace {

double small_det(std::vector<double> m, int k) {
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(m[r * k + c]) > std::abs(m[piv * k + c])) piv = r;
    if (m[piv * k + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < k; ++j) std::swap(m[c * k + j], m[piv * k + j]);
      det = -det;
    }
    det *= m[c * k + c];
    for (int r = c + 1; r < k; ++r) {
      double f = m[r * k + c] / m[c * k + c];
      if (f == 0.0) continue;
      for (int j = c; j < k; ++j) m[r * k + j] -= f * m[c * k + j];
    }
  }
  return det;
}

double submatrix_det(const SymMatrix& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1.0;
  std::vector<double> s(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) s[i * k + j] = m.at(rows[i], cols[j]);
  return small_det(std::move(s), k);
}

void unpack_mask(uint32_t mask, int n, std::vector<int>& in,
                 std::vector<int>& out) {
  in.clear();
  out.clear();
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i))
      in.push_back(i);
    else
      out.push_back(i);
  }
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace

double minor_sum(const SymMatrix& a, const SymMatrix& b, int k) {
  const int n = a.n;
  if (b.n != n) fail(Errc::DimensionMismatch, "minor_sum sizes differ");
  if (k < 1 || k > n) fail(Errc::DimensionMismatch, "minor order k out of 1..n");
  if (n > 16) fail(Errc::RankExceeded, "minor_sum supports n <= 16");

  std::vector<uint32_t> masks;
  for (uint32_t m = 0; m < (1u << n); ++m)
    if (__builtin_popcount(m) == k) masks.push_back(m);

  std::vector<int> rin, rout, cin, cout;
  double total = 0.0;
  for (uint32_t rm : masks) {
    unpack_mask(rm, n, rin, rout);
    int rsum = 0;
    for (int i : rin) rsum += i;
    for (uint32_t cm : masks) {
      unpack_mask(cm, n, cin, cout);
      int csum = 0;
      for (int j : cin) csum += j;
      double db = submatrix_det(b, rin, cin);
      if (db == 0.0) continue;
      double da = submatrix_det(a, rout, cout);
      double sign = ((rsum + csum) % 2 == 0) ? 1.0 : -1.0;
      total += db * sign * da;
    }
  }
  return total / binom(n, k);
}

ChainResult lemma41_check(const SymMatrix& a, const SymMatrix& b, double tol) {
  const int n = a.n;
  if (b.n != n) fail(Errc::DimensionMismatch, "lemma41_check sizes differ");
  if (n != 3) fail(Errc::DimensionMismatch, "lemma41_check is for n = 3");
  if (!psd_check(b, tol).psd) {
    fail(Errc::PreconditionViolated, "lemma41_check: B is not PSD");
  }
  SymMatrix diff(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) diff.a[i * n + j] = a.at(i, j) - b.at(i, j);
  if (!psd_check(diff, tol).psd) {
    fail(Errc::PreconditionViolated, "lemma41_check: A - B is not PSD");
  }

  ChainResult r;
  std::vector<int> all{0, 1, 2};
  r.values[0] = 3.0 * submatrix_det(b, all, all);
  r.values[1] = 3.0 * minor_sum(a, b, 2);  // = sum_ij a_ij cof(B)_ij
  r.values[2] = 3.0 * minor_sum(a, b, 1);  // = sum_ij b_ij cof(A)_ij
  r.values[3] = 3.0 * submatrix_det(a, all, all);

  double scale = 1.0;
  for (double v : r.values) scale = std::max(scale, std::abs(v));
  r.ok = true;
  for (int i = 0; i < 3; ++i) {
    r.nondecreasing[i] = r.values[i + 1] - r.values[i] >= -1e-9 * scale;
    r.ok = r.ok && r.nondecreasing[i];
  }
  return r;
}

}  // namespace coneray
