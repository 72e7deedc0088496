#pragma once

#include <vector>

#include "coneray/biquadratic.hpp"
#include "coneray/psd.hpp"

namespace coneray {

// Affine family base + span(dirs) of Gram matrices, all representing the same
// polynomial on the labelled monomial basis: basis element a is the monomial
// x^basis_x[a] * y^basis_y[a].
struct GramFamily {
  SymMatrix base;
  std::vector<SymMatrix> dirs;
  std::vector<Exps> basis_x, basis_y;
};

// Family of f on the x_i y_j basis.  One direction per 2x2 minor of the
// dx x dy matrix (x_i y_j): row pairs i<k and column pairs j<l, both in
// lexicographic order, rows outermost; this fixed order is what certificate
// coefficient vectors refer to.  Each direction moves Gram weight between the
// two products (x_i y_j)(x_k y_l) and (x_i y_l)(x_k y_j), which agree as
// functions, so the family sweeps exactly the Gram representatives of f.
GramFamily minor_shift_family(const BiquadraticForm& f);

// Family of f * (|x|^2 |y|^2)^r on the basis x^a y^b with |a| = |b| = 1 + r.
// Directions regroup every non-canonical unordered basis pair against the
// canonical pair sharing its product monomial.
GramFamily multiplier_family(const BiquadraticForm& f, int r);

}  // namespace coneray
