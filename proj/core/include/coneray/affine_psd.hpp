#pragma once

#include <cstdint>
#include <vector>

#include "coneray/psd.hpp"

namespace coneray {

// Maximize the minimum eigenvalue of base + sum_k c_k * directions[k].
struct AffinePsdProblem {
  SymMatrix base;
  std::vector<SymMatrix> directions;
  double tolerance = 1e-7;  // feasibility threshold on t_star
  uint64_t seed = 0;        // recorded for reproducibility; the ascent itself
                            // draws no randomness
  int max_iters = 4000;
};

enum class SliceStatus { Feasible, Infeasible, Stalled };

const char* slice_status_name(SliceStatus s);

struct SliceResult {
  double t_star = 0.0;          // best attained minimum eigenvalue
  std::vector<double> c_star;   // coefficients achieving it
  SymMatrix G;                  // base + sum c_star_k directions[k]
  SliceStatus status = SliceStatus::Stalled;
  int iterations = 0;           // accepted ascent steps
};

// Deterministic smoothed ascent on c -> lambda_min(base + sum c_k M_k):
// the objective is softened to -mu*log(tr exp(-G/mu)) whose gradient blends
// the extreme eigenvector outer products (equal eigenvalues share weight
// equally, which fixes the subgradient tie-break), and mu is driven down a
// fixed schedule.  Feasible iff t_star >= -tolerance.  Infeasible rests on
// the sandwich softmin <= lambda_min <= softmin + mu*log(n): a smoothing leg
// that converges with even its ceiling below -tolerance rules out every
// point of the slice.  Anything else is Stalled.
SliceResult max_min_eig(const AffinePsdProblem& problem);

}  // namespace coneray
