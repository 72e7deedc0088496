#include "coneray/sphere_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coneray/error.hpp"
#include "coneray/psd.hpp"

namespace coneray {

double Rng::gaussian() {
  // Box-Muller without caching the second value: one draw per call keeps the
  // stream position independent of call parity.
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

std::vector<double> Rng::unit_vector(int n) {
  std::vector<double> v(n);
  while (true) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = gaussian();
      norm2 += v[i] * v[i];
    }
    if (norm2 > 1e-12) {
      double inv = 1.0 / std::sqrt(norm2);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

namespace {

void normalize(std::vector<double>& v) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
}

// smallest eigenvector of a polynomial matrix evaluated at a point
std::vector<double> min_eigvec(const PolyMatrix& m, const std::vector<double>& at,
                               double* value) {
  const int n = m.rows();
  std::vector<double> entries = m.eval(at);
  SymMatrix s(n);
  s.a = std::move(entries);
  PsdVerdict v = psd_check(s, 0.0);
  if (value) *value = v.lambda_min;
  return v.witness;
}

}  // namespace

RankOneMin min_rank_one(const BiquadraticForm& f, int starts, int iters,
                        uint64_t seed) {
  if (starts < 1 || iters < 1) {
    fail(Errc::PreconditionViolated, "min_rank_one needs starts, iters >= 1");
  }
  PolyMatrix ty = f.y_matrix();
  PolyMatrix tx = f.x_matrix();
  Rng rng(seed);

  RankOneMin best;
  best.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    std::vector<double> y = rng.unit_vector(f.dy());
    std::vector<double> x;
    double fx = std::numeric_limits<double>::infinity();
    for (int it = 0; it < iters; ++it) {
      double lx = 0.0, ly = 0.0;
      x = min_eigvec(ty, y, &lx);
      y = min_eigvec(tx, x, &ly);
      if (std::abs(ly - fx) <= 1e-15 * (1.0 + std::abs(ly))) {
        fx = ly;
        break;
      }
      fx = ly;
    }
    if (fx < best.value) {
      best.value = fx;
      best.x = x;
      best.y = y;
    }
  }
  // exact value at the returned pair (the eigenvalue already equals it, but
  // re-evaluate to keep the reported number tied to the reported vectors)
  best.value = f.eval(best.x, best.y);
  return best;
}

namespace {

double tangent_grad(const FlatPoly& p, const std::vector<double>& y,
                    std::vector<double>& gt) {
  const int n = p.nvars;
  std::vector<double> g(n);
  p.grad(y.data(), g.data());
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += g[i] * y[i];
  gt.assign(n, 0.0);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    gt[i] = g[i] - dot * y[i];
    norm2 += gt[i] * gt[i];
  }
  return std::sqrt(norm2);
}

// The threshold must sit above convergence noise: a coordinate of order 1e-9
// on a point that is really on an axis would otherwise pick the overall sign
// at random and break the antipodal dedup downstream.
void canonical_sign(std::vector<double>& y) {
  for (double v : y) {
    if (std::abs(v) > 1e-7) {
      if (v < 0)
        for (double& x : y) x = -x;
      return;
    }
  }
}

}  // namespace

std::vector<SphereMin> sphere_minima(const FlatPoly& p, int starts, int iters,
                                     uint64_t seed, double keep_below,
                                     double dedup_tol) {
  const int n = p.nvars;
  if (n < 1) fail(Errc::DimensionMismatch, "sphere optimization needs nvars >= 1");
  Rng rng(seed);
  double scale = 1.0;
  for (double c : p.coeffs) scale = std::max(scale, std::abs(c));
  const double gtol = 1e-10 * scale;

  std::vector<SphereMin> found;
  std::vector<double> gt, trial(n);
  for (int s = 0; s < starts; ++s) {
    std::vector<double> y = rng.unit_vector(n);
    double fy = p.eval(y.data());
    double step = 0.1;
    double gnorm = 0.0;
    for (int it = 0; it < iters; ++it) {
      gnorm = tangent_grad(p, y, gt);
      if (gnorm <= gtol) break;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        for (int i = 0; i < n; ++i) trial[i] = y[i] - step * gt[i];
        normalize(trial);
        double ft = p.eval(trial.data());
        if (ft <= fy - 0.25 * step * gnorm * gnorm) {
          y = trial;
          fy = ft;
          step *= 1.6;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (fy > keep_below) continue;
    SphereMin m;
    m.y = y;
    canonical_sign(m.y);
    m.value = fy;
    m.grad_norm = gnorm;
    bool dup = false;
    for (const SphereMin& o : found) {
      // antipodal pairs are the same projective point even when the sign
      // canonicalization disagreed near an axis
      double dm = 0.0, dp = 0.0;
      for (int i = 0; i < n; ++i) {
        dm += (o.y[i] - m.y[i]) * (o.y[i] - m.y[i]);
        dp += (o.y[i] + m.y[i]) * (o.y[i] + m.y[i]);
      }
      if (std::sqrt(std::min(dm, dp)) < dedup_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) found.push_back(std::move(m));
  }

  std::sort(found.begin(), found.end(), [](const SphereMin& a, const SphereMin& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.y < b.y;
  });
  return found;
}

SphereMin sphere_min(const FlatPoly& p, int starts, int iters, uint64_t seed) {
  auto all = sphere_minima(p, starts, iters, seed,
                           std::numeric_limits<double>::infinity(), 1e-9);
  if (all.empty()) fail(Errc::Internal, "sphere search returned no candidates");
  return all.front();
}

}  // namespace coneray
