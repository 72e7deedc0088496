#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "coneray/rational.hpp"

namespace coneray {

// Dense symmetric matrix in doubles. set() writes both triangles so the
// storage is symmetric by construction.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;  // row-major, n*n

  SymMatrix() = default;
  explicit SymMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}

  double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  void set(int i, int j, double v) {
    a[static_cast<size_t>(i) * n + j] = v;
    a[static_cast<size_t>(j) * n + i] = v;
  }
  void add(int i, int j, double v) {
    a[static_cast<size_t>(i) * n + j] += v;
    if (i != j) a[static_cast<size_t>(j) * n + i] += v;
  }
  double max_abs() const;
};

struct PsdVerdict {
  bool psd = false;
  double lambda_min = 0.0;
  std::vector<double> witness;  // unit eigenvector for lambda_min
};

// Verdict by the smallest eigenvalue against -tol.
PsdVerdict psd_check(const SymMatrix& m, double tol);

// Full ascending eigenvalues and the matching orthonormal columns.
void sym_eig(const SymMatrix& m, std::vector<double>& eigenvalues,
             std::vector<std::vector<double>>& eigenvectors);

// Spectral square decomposition: vectors v_r with sum v_r v_r^T ~ G, dropping
// eigenvalues below rank_tol.  max-norm defect is at most n*rank_tol.
// Raises NotPsd when lambda_min < -rank_tol.
std::vector<std::vector<double>> gram_to_squares(const SymMatrix& g,
                                                 double rank_tol);

// Exact LDL-style decomposition of a rational symmetric matrix (row-major,
// n*n): G = sum_k d_k v_k v_k^T with every d_k > 0.  Returns nullopt when G
// is not PSD.  A zero pivot forces its whole row to be zero, otherwise the
// matrix is indefinite.
std::optional<std::vector<std::pair<Rational, std::vector<Rational>>>>
rational_psd_decompose(const std::vector<Rational>& g, int n);

// Convenience wrapper: exact PSD test.
bool rational_psd(const std::vector<Rational>& g, int n);

}  // namespace coneray
