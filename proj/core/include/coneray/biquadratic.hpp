#pragma once

#include <vector>

#include "coneray/elast_tensor.hpp"
#include "coneray/hompoly.hpp"
#include "coneray/poly_matrix.hpp"
#include "coneray/rational.hpp"

namespace coneray {

// A form quadratic in x (dimension dx) and quadratic in y (dimension dy),
// stored as a symmetric Gram matrix on the monomial basis x_i*y_j with flat
// index a = i*dy + j.  Evaluation is v.G.v where v = vec(x (x) y), so the
// stored matrix pins down one Gram representative of the form; forms that
// differ by a null Lagrangian have different Gram matrices but agree on every
// rank-one point.
class BiquadraticForm {
 public:
  BiquadraticForm(int dx, int dy, Mode mode = Mode::Exact);

  // Reads the tensor as a d^2 x d^2 matrix; the pair symmetry C_ijkl = C_klij
  // makes it symmetric as-is.
  static BiquadraticForm from_tensor(const ElastTensor& c);

  // Builds the form sum_{i,k} x_i x_k * t(i,k) from a symmetric matrix of
  // degree-2 polynomials in y.  The Gram entries are symmetrized over both
  // index swaps, so the result always carries a tensor-style Gram.
  static BiquadraticForm from_poly_matrix(const PolyMatrix& t);

  int dx() const { return dx_; }
  int dy() const { return dy_; }
  Mode mode() const { return mode_; }

  // Coefficient of x_i y_j x_k y_l in the Gram sense (0-based indices).
  const Rational& coeff(int i, int j, int k, int l) const;

  // Adds weight * (sum_{i,j} b[i*dy+j] x_i y_j)^2.
  void add_bilinear_square(const Rational& weight,
                           const std::vector<Rational>& b);

  bool is_zero() const;

  Rational eval(const std::vector<Rational>& x,
                const std::vector<Rational>& y) const;
  double eval(const std::vector<double>& x, const std::vector<double>& y) const;

  // T(y)_ik = sum_{j,l} G[(i,j),(k,l)] y_j y_l; the x-matrix swaps roles.
  PolyMatrix y_matrix() const;
  PolyMatrix x_matrix() const;

  // Dense symmetric (dx*dy)^2 Gram matrix, row-major on the flat basis.
  const std::vector<Rational>& gram() const { return gram_; }

  // The whole form as a polynomial in (x_1..x_dx, y_1..y_dy), degree 4.
  HomPoly to_poly() const;

  double max_abs_entry() const;

  bool operator==(const BiquadraticForm& other) const;
  bool operator!=(const BiquadraticForm& other) const { return !(*this == other); }

 private:
  int dx_;
  int dy_;
  Mode mode_;
  std::vector<Rational> gram_;  // (dx*dy)^2 entries, row-major, symmetric

  int flat(int i, int j) const { return i * dy_ + j; }
  Rational& gref(int a, int b) { return gram_[a * dx_ * dy_ + b]; }
  const Rational& gref(int a, int b) const { return gram_[a * dx_ * dy_ + b]; }
};

}  // namespace coneray
