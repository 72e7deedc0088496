#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coneray/hompoly.hpp"

namespace coneray {

// Linear form sum_i coeffs[i] * y_i.
struct LinearForm {
  int nvars = 0;
  std::vector<Rational> coeffs;

  bool is_zero() const;
  HomPoly to_poly() const;
  std::string str(const std::vector<std::string>& names = {}) const;
};

enum class QuadKind {
  Zero,
  SquareOfLinear,       // q = scale * l1^2, scale squarefree rational
  ProductOfTwoLinears,  // q = l1 * l2 (exact) or numeric factor pair
  IrreducibleDefinite,  // rank >= 2, one sign
  IrreducibleIndefinite
};

std::string quad_kind_name(QuadKind k);

// Rational congruence diagonalization q = sum_i d_i * l_i(y)^2 with the l_i
// linearly independent. Exact-mode inputs only.
struct QuadDiag {
  std::vector<Rational> d;
  std::vector<LinearForm> forms;
  int rank = 0, pos = 0, neg = 0;
};

// A quadratic form together with its Gram matrix and inertia.
class QuadForm {
 public:
  explicit QuadForm(const HomPoly& p);

  const HomPoly& poly() const { return poly_; }
  int n() const { return poly_.nvars(); }
  // Symmetric Gram matrix, row-major: q(y) = y^T G y.
  const std::vector<Rational>& gram() const { return gram_; }
  Rational gram(int i, int j) const { return gram_[i * n() + j]; }
  int rank() const { return diag_.rank; }
  int positive_index() const { return diag_.pos; }
  int negative_index() const { return diag_.neg; }
  const QuadDiag& diagonalization() const { return diag_; }

 private:
  HomPoly poly_;
  std::vector<Rational> gram_;
  QuadDiag diag_;
};

struct QuadClassification {
  QuadKind kind = QuadKind::Zero;
  int rank = 0, pos = 0, neg = 0;
  // SquareOfLinear: q = scale * l1^2. ProductOfTwoLinears with exact factors:
  // q = l1 * l2. When the hyperbolic factor split needs an irrational square
  // root, factors_exact is false and the pair lives in numeric_factors.
  Rational scale = Rational(1);
  std::optional<LinearForm> l1, l2;
  bool factors_exact = true;
  std::optional<std::array<std::vector<double>, 2>> numeric_factors;
};

QuadClassification quad_classify(const QuadForm& q);
inline QuadClassification quad_classify(const HomPoly& p) { return quad_classify(QuadForm(p)); }

}  // namespace coneray
