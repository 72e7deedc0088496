#pragma once

#include <array>

#include "coneray/psd.hpp"

namespace coneray {

// Averaged mixed minor sum
//   (1/C(n,k)) * sum over row sets R and column sets S, |R| = |S| = k, of
//   det(B[R,S]) * (-1)^(sum R + sum S) * det(A[R^c, S^c]).
// For A = B this is the (n-k)-th elementary symmetric function of the
// eigenvalues up to the binomial average; the k = n case is det B and the
// complementary determinant convention makes k = 1 the cofactor pairing
// sum_ij b_ij cof(A)_ij / n.
double minor_sum(const SymMatrix& a, const SymMatrix& b, int k);

struct ChainResult {
  // 3 det B <= sum_ij a_ij cof(B)_ij <= sum_ij b_ij cof(A)_ij <= 3 det A
  std::array<double, 4> values;
  std::array<bool, 3> nondecreasing;  // each step, within relative slack
  bool ok = false;                    // all three steps hold
};

// Evaluates the four-term chain above for n = 3 after verifying that B and
// A - B pass psd_check at the given tolerance (PreconditionViolated if not).
// Slack for the monotonicity flags is 1e-9 relative to the value scale.
ChainResult lemma41_check(const SymMatrix& a, const SymMatrix& b,
                          double tol = 1e-7);

}  // namespace coneray
