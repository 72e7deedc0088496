#pragma once

#include <array>
#include <vector>

#include "coneray/hompoly.hpp"

namespace coneray {

// Dense matrix of homogeneous polynomials sharing one variable set and one
// entry degree (entries may be zero).
class PolyMatrix {
 public:
  PolyMatrix() : rows_(0), cols_(0), nvars_(0), degree_(0) {}
  PolyMatrix(int rows, int cols, int nvars, int degree, Mode mode = Mode::Exact);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }
  int entry_degree() const { return degree_; }

  const HomPoly& at(int i, int j) const { return e_[i * cols_ + j]; }
  void set(int i, int j, const HomPoly& p);

  bool is_zero() const;
  bool is_symmetric() const;
  PolyMatrix transpose() const;
  // Row/column selection (indices may repeat or reorder).
  PolyMatrix select(const std::vector<int>& rows, const std::vector<int>& cols) const;

  // Laplace expansion; rows() == cols() <= 4.
  HomPoly det() const;
  // Signed minor: (-1)^{i+j} det of the matrix with row i and column j removed.
  HomPoly cofactor(int i, int j) const;
  PolyMatrix cofactor_matrix() const;

  // Entrywise evaluation, row-major.
  std::vector<double> eval(const std::vector<double>& y) const;
  std::vector<Rational> eval(const std::vector<Rational>& y) const;

  bool operator==(const PolyMatrix& o) const;

 private:
  int rows_, cols_, nvars_, degree_;
  std::vector<HomPoly> e_;
};

// Coefficients of det(T - lambda*T1) = c0 - lambda*c1 + lambda^2*c2 -
// lambda^3*c3 for symmetric 3x3 inputs: c0 = det T, c1 = sum t1_ij cof(T)_ij,
// c2 = sum t_ij cof(T1)_ij, c3 = det T1.
std::array<HomPoly, 4> mixed_det_expansion(const PolyMatrix& t, const PolyMatrix& t1);

}  // namespace coneray
