#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coneray/hompoly.hpp"

namespace coneray {

struct ZeroOptions {
  int starts = 128;
  int iters = 400;
  uint64_t seed = 0;
  double zero_tol = 1e-10;   // relative: keep minima with value <= zero_tol * scale
  double nonneg_tol = 1e-7;  // relative: a minimum below -nonneg_tol * scale raises
  double dedup_tol = 1e-6;   // angular separation of distinct zeros
  int curve_limit = 20;      // more zeros than this means a zero curve
  int curve_samples = 24;    // farthest-point subsample size in that case
};

// Projective zero set of a nonnegative sextic: unit representatives with the
// first nonzero coordinate positive.
struct ZeroSet {
  std::vector<std::vector<double>> points;
  std::vector<double> residuals;  // |P(z)| per point
  double dedup_tol = 0.0;
  bool curve_sampled = false;  // thinned to curve_samples farthest points
};

ZeroSet find_zeros(const HomPoly& p, const ZeroOptions& opts = {});

struct ConstraintLevels {
  bool value = true;
  bool gradient = true;
  bool hessian_kernel = true;
};

// Linear conditions that every nonnegative summand of P must satisfy, as rows
// acting on the 28-dimensional coefficient space of sextics (graded-lex
// monomial order, leading first). Per zero z: Q(z) = 0, grad Q(z) = 0, and
// Hess(Q)(z) v = 0 for each kernel direction v of Hess(P)(z) beyond the
// radial one.
struct ConstraintSystem {
  std::vector<std::vector<double>> rows;
  ConstraintLevels levels;
  int rows_value = 0;
  int rows_gradient = 0;
  int rows_hessian = 0;
};

ConstraintSystem zero_constraints(const HomPoly& p, const ZeroSet& z,
                                  const ConstraintLevels& levels = {});

enum class ExtremalityKind {
  Extremal,
  ExtremalByPerfectSquare,
  NotExtremal,
  Inconclusive
};

const char* extremality_kind_name(ExtremalityKind k);

// The guarantees are one-sided by design: Extremal needs the constraint
// kernel to have dimension exactly 1 (the constraints are necessary, so this
// is sound), NotExtremal needs a fully verified witness, and anything resting
// on a marginal rank decision degrades to Inconclusive.
struct ExtremalityVerdict {
  ExtremalityKind kind = ExtremalityKind::Inconclusive;
  int kernel_dim = 0;
  HomPoly square_root;         // ExtremalByPerfectSquare: P = square_root^2
  HomPoly witness;             // NotExtremal: nonnegative, constraint-feasible
  double witness_scale = 0.0;  // c with c*P - witness still nonnegative

  // evidence
  int zero_count = 0;
  int rows_value = 0;
  int rows_gradient = 0;
  int rows_hessian = 0;
  double gap_ratio = std::numeric_limits<double>::infinity();
  double membership_residual = 0.0;  // |A p|_inf for unit-normalized p
  std::vector<double> singular_values;
  std::string note;
};

ExtremalityVerdict extremality_test(const HomPoly& p, uint64_t seed = 0);

}  // namespace coneray
