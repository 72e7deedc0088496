#pragma once

#include <string>

#include "coneray/elast_tensor.hpp"
#include "coneray/hompoly.hpp"

namespace coneray {

// {"nvars": int, "degree": int, "terms": [{"exp": [..], "coeff": "p/q"|float}]}
// Terms are emitted leading-first (descending graded lex).  Exact polynomials
// use rational strings, numeric ones floats; parsing accepts either and taints
// the polynomial Numeric when any float coefficient appears.
std::string poly_to_json(const HomPoly& p);
HomPoly poly_from_json(const std::string& text);

// {"d": int, "entries": [{"i","j","k","l","value"}], "strict": bool} with
// 1-based indices, one entry per symmetry orbit on output.
std::string tensor_to_json(const ElastTensor& c);
ElastTensor tensor_from_json(const std::string& text);

}  // namespace coneray
