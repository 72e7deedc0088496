#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "coneray/biquadratic.hpp"
#include "coneray/hompoly.hpp"

namespace coneray {

// mt19937_64 with hand-rolled uniform/gaussian transforms, so the stream is
// pinned by this file alone and not by library-specific distribution code.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double gaussian();
  std::vector<double> unit_vector(int n);
  uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

struct RankOneMin {
  std::vector<double> x, y;  // unit vectors
  double value = 0.0;        // f(x, y)
};

// Minimize f over |x| = |y| = 1 by alternating smallest-eigenvector steps
// (exact in x for fixed y and vice versa), restarted from `starts` random y.
RankOneMin min_rank_one(const BiquadraticForm& f, int starts, int iters,
                        uint64_t seed);

struct SphereMin {
  std::vector<double> y;
  double value = 0.0;
  double grad_norm = 0.0;  // tangential gradient norm at y
};

// Multistart projected-gradient minimization of p over the unit sphere.
// Returns converged local minima with value <= keep_below, deduplicated up to
// the antipodal symmetry (first nonzero coordinate is made positive) within
// dedup_tol, sorted by value then coordinates.
std::vector<SphereMin> sphere_minima(const FlatPoly& p, int starts, int iters,
                                     uint64_t seed, double keep_below,
                                     double dedup_tol);

// Best single minimum (keep_below = +inf convenience).
SphereMin sphere_min(const FlatPoly& p, int starts, int iters, uint64_t seed);

}  // namespace coneray
