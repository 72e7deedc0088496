#include "coneray/psd.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "coneray/error.hpp"

namespace coneray {

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_sym(const SymMatrix& m) {
  Eigen::Map<const Eigen::MatrixXd> em(m.a.data(), m.n, m.n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em);
  if (es.info() != Eigen::Success) {
    fail(Errc::Internal, "symmetric eigensolver failed to converge");
  }
  return es;
}

}  // namespace

PsdVerdict psd_check(const SymMatrix& m, double tol) {
  if (m.n == 0) return {true, 0.0, {}};
  auto es = solve_sym(m);
  PsdVerdict v;
  v.lambda_min = es.eigenvalues()(0);
  v.psd = v.lambda_min >= -tol;
  v.witness.assign(m.n, 0.0);
  for (int i = 0; i < m.n; ++i) v.witness[i] = es.eigenvectors()(i, 0);
  return v;
}

void sym_eig(const SymMatrix& m, std::vector<double>& eigenvalues,
             std::vector<std::vector<double>>& eigenvectors) {
  auto es = solve_sym(m);
  eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.n);
  eigenvectors.assign(m.n, std::vector<double>(m.n, 0.0));
  for (int r = 0; r < m.n; ++r)
    for (int i = 0; i < m.n; ++i) eigenvectors[r][i] = es.eigenvectors()(i, r);
}

std::vector<std::vector<double>> gram_to_squares(const SymMatrix& g,
                                                 double rank_tol) {
  auto es = solve_sym(g);
  if (g.n > 0 && es.eigenvalues()(0) < -rank_tol) {
    fail(Errc::NotPsd, "gram matrix has eigenvalue " +
                           std::to_string(es.eigenvalues()(0)) +
                           " below -rank_tol");
  }
  std::vector<std::vector<double>> squares;
  for (int r = g.n - 1; r >= 0; --r) {
    double lam = es.eigenvalues()(r);
    if (lam < rank_tol) continue;
    double s = std::sqrt(lam);
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = s * es.eigenvectors()(i, r);
    squares.push_back(std::move(v));
  }
  return squares;
}

std::optional<std::vector<std::pair<Rational, std::vector<Rational>>>>
rational_psd_decompose(const std::vector<Rational>& g, int n) {
  if (static_cast<int>(g.size()) != n * n) {
    fail(Errc::DimensionMismatch, "rational gram storage size mismatch");
  }
  std::vector<Rational> m = g;
  auto at = [&](int i, int j) -> Rational& { return m[i * n + j]; };
  std::vector<std::pair<Rational, std::vector<Rational>>> out;
  for (int k = 0; k < n; ++k) {
    Rational d = at(k, k);
    if (d < 0) return std::nullopt;
    if (d == 0) {
      // PSD forces the whole row to vanish with the diagonal
      for (int j = 0; j < n; ++j)
        if (at(k, j) != 0) return std::nullopt;
      continue;
    }
    std::vector<Rational> v(n, Rational(0));
    for (int j = 0; j < n; ++j) v[j] = at(k, j) / d;
    for (int i = k; i < n; ++i) {
      if (v[i] == 0) continue;
      for (int j = k; j < n; ++j) at(i, j) -= d * v[i] * v[j];
    }
    out.emplace_back(d, std::move(v));
  }
  return out;
}

bool rational_psd(const std::vector<Rational>& g, int n) {
  return rational_psd_decompose(g, n).has_value();
}

}  // namespace coneray
