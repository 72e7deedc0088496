#pragma once

#include <array>
#include <vector>

#include "coneray/poly_matrix.hpp"

namespace coneray {

// Raw coefficient assignment C_ijkl = value, 0-based indices.
struct TensorEntry {
  int i, j, k, l;
  Rational value;
};

// Fourth-order tensor with the symmetries C_ijkl = C_kjil = C_ilkj, the
// coefficient tensor of a biquadratic form f(x, y) = C_ijkl x_i y_j x_k y_l.
// Equivalently a quadratic form f(xi) = C_ijkl xi_ij xi_kl on d x d matrices
// (xi_ij is variable i*d+j in row-major order). Storage is always fully
// symmetrized.
class ElastTensor {
 public:
  explicit ElastTensor(int d, Mode mode = Mode::Exact);

  // Assemble from raw entries. Each supplied entry is a claim about its whole
  // symmetry orbit; the orbit value is the mean of the supplied claims. In
  // strict mode any disagreement among claims raises ConflictingAssignment.
  static ElastTensor from_entries(int d, const std::vector<TensorEntry>& entries, bool strict);

  // Read off the unique symmetric tensor with the given associated quadratic
  // form on matrices: the Gram matrix of f is averaged over the symmetry
  // group, which drops the null Lagrangian (determinant) part of f.
  static ElastTensor from_form(const HomPoly& f);

  int dim() const { return d_; }
  Mode mode() const { return mode_; }
  const Rational& at(int i, int j, int k, int l) const;
  void set(int i, int j, int k, int l, const Rational& v);  // sets the whole orbit
  bool is_zero() const;
  bool operator==(const ElastTensor& o) const;

  // f(xi) = sum C_ijkl xi_ij xi_kl on d^2 variables.
  HomPoly to_form() const;
  Rational eval_rank_one(const std::vector<Rational>& x, const std::vector<Rational>& y) const;
  double eval_rank_one(const std::vector<double>& x, const std::vector<double>& y) const;

  // T(y)_ik = sum_jl C_ijkl y_j y_l; symmetric with f(x, y) = x^T T(y) x.
  PolyMatrix acoustic_matrix() const;
  // T^x(x)_jl = sum_ik C_ijkl x_i x_k; the same form read as y^T T^x(x) y.
  PolyMatrix x_matrix() const;

  double max_abs_entry() const;
  void taint_numeric() { mode_ = Mode::Numeric; }

  // Symmetry orbit of an index quadruple under {e, i<->k, j<->l, both}.
  static std::array<std::array<int, 4>, 4> orbit(int i, int j, int k, int l);

 private:
  size_t idx(int i, int j, int k, int l) const;

  int d_;
  Mode mode_;
  std::vector<Rational> c_;
};

}  // namespace coneray
