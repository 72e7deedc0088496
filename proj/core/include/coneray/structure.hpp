#pragma once

#include <optional>
#include <vector>

#include "coneray/hompoly.hpp"
#include "coneray/poly_matrix.hpp"
#include "coneray/quadform.hpp"

namespace coneray {

// Exact factorization a_ij = b_i * c_j of a polynomial matrix whose 2x2
// minors all vanish identically.
struct Rank1Factorization {
  std::vector<HomPoly> b;  // one per row
  std::vector<HomPoly> c;  // one per column
  bool verified = false;   // reconstruction checked entrywise
};

// Throws RankExceeded (with a witness minor in the message) when some 2x2
// minor is nonzero. Symmetric input with a perfect-square pivot diagonal
// yields the balanced form b = c.
Rank1Factorization rank1_factor_polymatrix(const PolyMatrix& a);

// Coefficients expressing one row of a singular symmetric 3x3 matrix through
// the other two: row_pivot = r * row_u + q * row_v with r = -cof(u,pivot) /
// cof(pivot,pivot) and q = -cof(v,pivot) / cof(pivot,pivot), stored
// gcd-reduced with a positive-leading denominator.
struct RowCombination {
  int pivot = 2, u = 0, v = 1;
  HomPoly r_num, r_den;
  HomPoly q_num, q_den;
  bool verified = false;  // adjugate identity checked symbolically
};

RowCombination row_combination_coeffs(const PolyMatrix& s, int pivot = 2);

// Proportionality constant of two quadratics sharing a zero set: samples the
// zero set of the indefinite q2, and if q1 vanishes there too, returns the
// rational lambda with q1 == lambda * q2 verified exactly. nullopt when the
// vanishing hypothesis (or the exact identity) fails.
std::optional<Rational> marcellini_ratio(const QuadForm& q1, const QuadForm& q2);

// Strict sign witnesses near a zero of an indefinite quadratic, as exact
// rational points within the given radius of z0.
struct SignWitnesses {
  std::vector<Rational> p_neg, p_pos;
  Rational value_neg, value_pos;  // q(p_neg) < 0 < q(p_pos)
};

SignWitnesses lemma44_sign_witnesses(const QuadForm& q,
                                     const std::vector<double>& z0,
                                     double radius);

// Template match for singular acoustic matrices whose third cofactor row
// vanishes: either the top-left block is built from scalar multiples of one
// quadratic P, or from pairwise products of linear forms.
//   Form36: [[P, aP, bP], [aP, a^2 P, ab P], [bP, ab P, Q]]
//   Form37: [[l1^2, l1 l2, l1 l3], [l1 l2, l2^2, l2 l3], [l1 l3, l2 l3, Q]]
struct StructuredForm {
  enum class Kind { Form36, Form37, NotStructured };
  Kind kind = Kind::NotStructured;
  HomPoly p;              // Form36 block quadratic
  HomPoly q;              // corner quadratic (both templates)
  Rational alpha, beta;   // Form36 multipliers
  HomPoly l1, l2, l3;     // Form37 linear forms
};

StructuredForm structured_form_detect(const PolyMatrix& t);

}  // namespace coneray
