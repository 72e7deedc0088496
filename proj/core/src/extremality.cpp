#include "coneray/extremality.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coneray/error.hpp"
#include "coneray/psd.hpp"
#include "coneray/sphere_opt.hpp"

namespace coneray {
namespace {

void require_sextic(const HomPoly& p, const char* who) {
  if (p.nvars() != 3) fail(Errc::UnsupportedDimension, std::string(who) + ": three variables required");
  if (p.degree() != 6) fail(Errc::DegreeMismatch, std::string(who) + ": degree 6 required");
}

double coeff_scale(const HomPoly& p) { return std::max(1.0, p.max_abs_coeff()); }

// distance between projective points already in canonical antipodal form
double proj_dist(const std::vector<double>& u, const std::vector<double>& v) {
  double dm = 0.0, dp = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dm += (u[i] - v[i]) * (u[i] - v[i]);
    dp += (u[i] + v[i]) * (u[i] + v[i]);
  }
  return std::sqrt(std::min(dm, dp));
}

// monomial and its first two derivatives at a point
double mon_val(const Exps& e, const std::vector<double>& y) {
  double v = 1.0;
  for (size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v *= y[i];
  return v;
}

double mon_d1(const Exps& e, int a, const std::vector<double>& y) {
  if (e[a] == 0) return 0.0;
  Exps f = e;
  --f[a];
  return e[a] * mon_val(f, y);
}

double mon_d2(const Exps& e, int a, int b, const std::vector<double>& y) {
  if (e[a] == 0) return 0.0;
  Exps f = e;
  --f[a];
  if (f[b] == 0) return 0.0;
  double c = static_cast<double>(e[a]) * f[b];
  --f[b];
  return c * mon_val(f, y);
}

// greedy farthest-point subsample, deterministic: start from the first point
// (sorted order) and repeatedly add the point furthest from the chosen set
void thin_to(ZeroSet& z, int target) {
  const int n = static_cast<int>(z.points.size());
  std::vector<int> chosen{0};
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(chosen.size()) < target) {
    int lastc = chosen.back();
    int arg = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], proj_dist(z.points[i], z.points[lastc]));
      if (dist[i] > best) {
        best = dist[i];
        arg = i;
      }
    }
    if (arg < 0 || best <= 0.0) break;
    chosen.push_back(arg);
  }
  std::sort(chosen.begin(), chosen.end());
  ZeroSet out;
  out.dedup_tol = z.dedup_tol;
  out.curve_sampled = true;
  for (int i : chosen) {
    out.points.push_back(z.points[i]);
    out.residuals.push_back(z.residuals[i]);
  }
  z = std::move(out);
}

// Newton refinement of a near-zero on the unit sphere. Descent alone leaves
// the point ~1e-5 off in quadratic basins and ~1e-3 off along quartic-flat
// directions (value v^4 cannot pass a 1e-10 cut there); the tangent-space
// Newton step squares the error in the former and still contracts it by 2/3
// per round in the latter.
std::vector<double> polish_zero(const FlatPoly& p, std::vector<double> z) {
  double n2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  double inv = 1.0 / std::sqrt(n2);
  for (double& c : z) c *= inv;
  double fz = p.eval(z.data());

  std::vector<double> g(3), h(9), trial(3);
  for (int round = 0; round < 80; ++round) {
    if (fz == 0.0) break;
    p.grad(z.data(), g.data());
    p.hess(z.data(), h.data());

    // orthonormal tangent basis at z
    int least = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(z[i]) < std::abs(z[least])) least = i;
    double t1[3] = {0.0, 0.0, 0.0};
    t1[least] = 1.0;
    double zdot = z[least];
    for (int i = 0; i < 3; ++i) t1[i] -= zdot * z[i];
    double t1n = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (double& c : t1) c /= t1n;
    double t2[3] = {z[1] * t1[2] - z[2] * t1[1], z[2] * t1[0] - z[0] * t1[2],
                    z[0] * t1[1] - z[1] * t1[0]};

    double radial = g[0] * z[0] + g[1] * z[1] + g[2] * z[2];
    auto hquad = [&](const double* a, const double* b) {
      double s = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) s += a[r] * h[r * 3 + c] * b[c];
      return s;
    };
    // Riemannian Hessian on the sphere: project and subtract the radial pull
    double h11 = hquad(t1, t1) - radial, h12 = hquad(t1, t2);
    double h22 = hquad(t2, t2) - radial;
    double g1 = g[0] * t1[0] + g[1] * t1[1] + g[2] * t1[2];
    double g2 = g[0] * t2[0] + g[1] * t2[1] + g[2] * t2[2];

    // Pseudo-inverse of the 2x2 tangent Hessian via its eigendecomposition.
    // The cutoff only guards the division itself: a flat direction carries a
    // curvature of order error^2 and must stay invertible down to the last
    // digits, otherwise the polish stalls around 1e-7 there. Oversized steps
    // are capped below and absorbed by the backtracking.
    double tr = h11 + h22, det = h11 * h22 - h12 * h12;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
    double cutoff = 1e-140 * (std::abs(l1) + std::abs(l2) + 1.0);

    // One eigenvector from whichever algebraic form is better conditioned,
    // the other as its exact perpendicular. A noise vector for a repeated
    // eigenvalue would otherwise serve both slots and freeze the step's
    // orthogonal component.
    double va = h12, vb = l1 - h11;
    double wa = l1 - h22, wb = h12;
    if (wa * wa + wb * wb > va * va + vb * vb) {
      va = wa;
      vb = wb;
    }
    double vn = std::sqrt(va * va + vb * vb);
    if (vn < 1e-300) {
      va = 1.0;
      vb = 0.0;
    } else {
      va /= vn;
      vb /= vn;
    }
    double s1 = 0.0, s2 = 0.0;
    bool any = false;
    if (std::abs(l1) > cutoff) {
      double proj = (g1 * va + g2 * vb) / l1;
      s1 -= proj * va;
      s2 -= proj * vb;
      any = true;
    }
    if (std::abs(l2) > cutoff) {
      double proj = (-g1 * vb + g2 * va) / l2;
      s1 -= proj * -vb;
      s2 -= proj * va;
      any = true;
    }
    if (!any) break;
    double snorm = std::sqrt(s1 * s1 + s2 * s2);
    if (snorm > 0.5) {
      s1 *= 0.5 / snorm;
      s2 *= 0.5 / snorm;
    }

    bool improved = false;
    double damp = 1.0;
    for (int bt = 0; bt < 20; ++bt) {
      for (int i = 0; i < 3; ++i) trial[i] = z[i] + damp * (s1 * t1[i] + s2 * t2[i]);
      double tn = std::sqrt(trial[0] * trial[0] + trial[1] * trial[1] + trial[2] * trial[2]);
      for (double& c : trial) c /= tn;
      double ft = p.eval(trial.data());
      if (ft < fz) {
        z = trial;
        fz = ft;
        improved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!improved) break;
  }
  return z;
}

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

ZeroSet find_zeros(const HomPoly& p, const ZeroOptions& opts) {
  require_sextic(p, "find_zeros");
  double scale = coeff_scale(p);
  FlatPoly fp(p);
  // Collect candidates well above the final threshold: a zero approached
  // along a flat direction plateaus around 1e-9 under plain descent and only
  // the polish below pushes it through the zero_tol cut.
  const double candidate_tol = std::max(opts.zero_tol, 1e-5);
  auto minima = sphere_minima(fp, opts.starts, opts.iters, opts.seed,
                              candidate_tol * scale, opts.dedup_tol);
  for (const auto& m : minima)
    if (m.value < -opts.nonneg_tol * scale) {
      std::ostringstream os;
      os << "find_zeros: negative value " << m.value << " on the sphere";
      fail(Errc::NotNonnegative, os.str());
    }

  ZeroSet z;
  z.dedup_tol = opts.dedup_tol;
  for (const auto& m : minima) {
    std::vector<double> y = polish_zero(fp, m.y);
    double value = fp.eval(y.data());
    if (value > opts.zero_tol * scale) continue;
    canonical_sign(y);
    bool dup = false;
    for (const auto& seen : z.points)
      if (proj_dist(seen, y) < opts.dedup_tol) {
        dup = true;
        break;
      }
    if (dup) continue;
    z.points.push_back(std::move(y));
    z.residuals.push_back(std::abs(value));
  }

  // lexicographic order: stable under scaling the input, unlike the attained
  // values, which are pure noise this close to zero
  std::vector<size_t> order(z.points.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return z.points[a] < z.points[b]; });
  ZeroSet sorted;
  sorted.dedup_tol = z.dedup_tol;
  for (size_t i : order) {
    sorted.points.push_back(std::move(z.points[i]));
    sorted.residuals.push_back(z.residuals[i]);
  }
  z = std::move(sorted);

  if (static_cast<int>(z.points.size()) > opts.curve_limit)
    thin_to(z, opts.curve_samples);
  return z;
}

ConstraintSystem zero_constraints(const HomPoly& p, const ZeroSet& z,
                                  const ConstraintLevels& levels) {
  require_sextic(p, "zero_constraints");
  const std::vector<Exps> basis = monomial_basis(3, 6);
  const int nb = static_cast<int>(basis.size());
  FlatPoly fp(p);

  ConstraintSystem cs;
  cs.levels = levels;
  for (const auto& zp : z.points) {
    if (levels.value) {
      std::vector<double> row(nb);
      for (int m = 0; m < nb; ++m) row[m] = mon_val(basis[m], zp);
      cs.rows.push_back(std::move(row));
      ++cs.rows_value;
    }
    if (levels.gradient) {
      for (int a = 0; a < 3; ++a) {
        std::vector<double> row(nb);
        for (int m = 0; m < nb; ++m) row[m] = mon_d1(basis[m], a, zp);
        cs.rows.push_back(std::move(row));
        ++cs.rows_gradient;
      }
    }
    if (levels.hessian_kernel) {
      std::vector<double> h(9);
      fp.hess(zp.data(), h.data());
      double hscale = 1.0;
      for (double v : h) hscale = std::max(hscale, std::abs(v));

      // restrict the Hessian to the tangent plane of the sphere at z; the
      // radial direction is always in the kernel (Euler relation) and must
      // not produce rows
      int drop = 0;
      for (int i = 1; i < 3; ++i)
        if (std::abs(zp[i]) < std::abs(zp[drop])) drop = i;
      std::vector<double> t1(3, 0.0);
      t1[drop] = 1.0;
      double dz = 0.0;
      for (int i = 0; i < 3; ++i) dz += t1[i] * zp[i];
      for (int i = 0; i < 3; ++i) t1[i] -= dz * zp[i];
      double n1 = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
      for (double& v : t1) v /= n1;
      std::vector<double> t2 = {zp[1] * t1[2] - zp[2] * t1[1],
                                zp[2] * t1[0] - zp[0] * t1[2],
                                zp[0] * t1[1] - zp[1] * t1[0]};

      auto quad = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) s += u[i] * h[static_cast<size_t>(i) * 3 + j] * v[j];
        return s;
      };
      SymMatrix m2(2);
      m2.set(0, 0, quad(t1, t1));
      m2.set(0, 1, quad(t1, t2));
      m2.set(1, 1, quad(t2, t2));
      std::vector<double> ev;
      std::vector<std::vector<double>> evec;
      sym_eig(m2, ev, evec);

      for (int k = 0; k < 2; ++k) {
        if (std::abs(ev[k]) > 1e-7 * hscale) continue;
        std::vector<double> v(3);
        for (int i = 0; i < 3; ++i) v[i] = evec[k][0] * t1[i] + evec[k][1] * t2[i];
        for (int a = 0; a < 3; ++a) {
          std::vector<double> row(nb);
          for (int m = 0; m < nb; ++m) {
            double s = 0.0;
            for (int b = 0; b < 3; ++b) s += mon_d2(basis[m], a, b, zp) * v[b];
            row[m] = s;
          }
          cs.rows.push_back(std::move(row));
          ++cs.rows_hessian;
        }
      }
    }
  }
  return cs;
}

const char* extremality_kind_name(ExtremalityKind k) {
  switch (k) {
    case ExtremalityKind::Extremal: return "Extremal";
    case ExtremalityKind::ExtremalByPerfectSquare: return "ExtremalByPerfectSquare";
    case ExtremalityKind::NotExtremal: return "NotExtremal";
    case ExtremalityKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

// minimum of the polynomial over the unit sphere, the standard witness check
double sphere_floor(const HomPoly& q, uint64_t seed) {
  return sphere_min(FlatPoly(q), 64, 300, seed).value;
}

// doubling line search for c with c*P - Q nonnegative on the sphere
bool find_scale(const HomPoly& p, const HomPoly& q, uint64_t seed, double& c_out) {
  Rational c(1);
  for (int k = 0; k <= 30; ++k) {
    HomPoly r = p.scaled(c) - q;
    if (sphere_floor(r, seed + k) >= -1e-8 * coeff_scale(r)) {
      c_out = to_double(c);
      return true;
    }
    c *= 2;
  }
  return false;
}

double angle_between(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  double c = std::abs(ab) / std::sqrt(std::max(aa * bb, 1e-300));
  return std::acos(std::min(1.0, c));
}

}  // namespace

ExtremalityVerdict extremality_test(const HomPoly& p, uint64_t seed) {
  require_sextic(p, "extremality_test");
  if (p.is_zero()) fail(Errc::InputError, "extremality_test: zero polynomial");

  ExtremalityVerdict out;
  if (auto q = perfect_square_test(p)) {
    out.kind = ExtremalityKind::ExtremalByPerfectSquare;
    out.square_root = *q;
    out.kernel_dim = 1;
    return out;
  }

  ZeroOptions zo;
  zo.seed = seed;
  ZeroSet z = find_zeros(p, zo);
  ConstraintSystem cs = zero_constraints(p, z);
  out.zero_count = static_cast<int>(z.points.size());
  out.rows_value = cs.rows_value;
  out.rows_gradient = cs.rows_gradient;
  out.rows_hessian = cs.rows_hessian;

  const int nb = 28;
  std::vector<double> pvecd = p.coeff_vector(6);
  Eigen::VectorXd pv(nb);
  for (int i = 0; i < nb; ++i) pv(i) = pvecd[i];
  pv.normalize();

  const int nr = static_cast<int>(cs.rows.size());
  Eigen::MatrixXd kernel;  // columns span the numerical kernel
  double a_scale = 1.0;
  if (nr == 0) {
    kernel = Eigen::MatrixXd::Identity(nb, nb);
    out.kernel_dim = nb;
  } else {
    Eigen::MatrixXd a(nr, nb);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nb; ++j) a(i, j) = cs.rows[i][j];
    a_scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    out.membership_residual = (a * pv).cwiseAbs().maxCoeff();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    std::vector<double> sigma(nb, 0.0);
    for (int i = 0; i < sv.size() && i < nb; ++i) sigma[i] = sv(i);
    out.singular_values = sigma;

    double smax = sigma[0];
    double thresh = 1e-7 * smax;
    int rank = 0;
    while (rank < nb && sigma[rank] > thresh) ++rank;
    out.kernel_dim = nb - rank;
    if (rank > 0 && rank < nb)
      out.gap_ratio = sigma[rank] > 0.0
                          ? sigma[rank - 1] / sigma[rank]
                          : std::numeric_limits<double>::infinity();
    kernel = svd.matrixV().rightCols(out.kernel_dim);
  }

  if (out.membership_residual > 1e-8 * a_scale) {
    out.kind = ExtremalityKind::Inconclusive;
    out.note = "constraint rows fail to annihilate P itself; zero set unreliable";
    return out;
  }
  if (out.gap_ratio < 10.0) {
    out.kind = ExtremalityKind::Inconclusive;
    out.note = "singular-value gap at the rank threshold is marginal";
    return out;
  }
  if (out.kernel_dim == 0) {
    out.kind = ExtremalityKind::Inconclusive;
    out.note = "kernel numerically empty though P must lie in it";
    return out;
  }
  if (out.kernel_dim == 1) {
    double ang = angle_between(
        std::vector<double>(kernel.col(0).data(), kernel.col(0).data() + nb),
        std::vector<double>(pv.data(), pv.data() + nb));
    if (ang < 1e-6) {
      out.kind = ExtremalityKind::Extremal;
    } else {
      out.kind = ExtremalityKind::Inconclusive;
      out.note = "one-dimensional kernel is not spanned by P";
    }
    return out;
  }

  // Witness search. Deterministic probes first: the ten nonnegative even
  // monomials that happen to satisfy every constraint row.
  const std::vector<Exps> basis = monomial_basis(3, 6);
  auto row_residual = [&](const Eigen::VectorXd& q) {
    double r = 0.0;
    for (const auto& row : cs.rows) {
      double s = 0.0;
      for (int j = 0; j < nb; ++j) s += row[j] * q(j);
      r = std::max(r, std::abs(s));
    }
    return r;
  };
  auto try_witness = [&](const HomPoly& q, const Eigen::VectorXd& qvec,
                         uint64_t s) -> bool {
    if (row_residual(qvec) > 1e-6 * a_scale * qvec.cwiseAbs().maxCoeff()) return false;
    double ang = angle_between(std::vector<double>(qvec.data(), qvec.data() + nb),
                               std::vector<double>(pv.data(), pv.data() + nb));
    if (ang < 1e-6) return false;
    if (sphere_floor(q, s) < -1e-8 * coeff_scale(q)) return false;
    double c;
    if (!find_scale(p, q, s + 100, c)) return false;
    out.kind = ExtremalityKind::NotExtremal;
    out.witness = q;
    out.witness_scale = c;
    return true;
  };

  uint64_t sub = seed * 0x9e3779b97f4a7c15ULL + 1;
  for (int m = 0; m < nb; ++m) {
    const Exps& e = basis[m];
    if (e[0] % 2 || e[1] % 2 || e[2] % 2) continue;
    Eigen::VectorXd qvec = Eigen::VectorXd::Zero(nb);
    qvec(m) = 1.0;
    if (try_witness(HomPoly::monomial(3, e, Rational(1)), qvec, ++sub)) return out;
  }

  // Random kernel directions around P: Q = P_hat + eps*D with D in the kernel
  // and orthogonal to P, shrinking eps until both Q and 2*P_hat - Q clear the
  // nonnegativity check.
  Rng rng(seed + 7);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(nb);
    for (int k = 0; k < kernel.cols(); ++k) d += rng.gaussian() * kernel.col(k);
    d -= d.dot(pv) * pv;
    double dn = d.norm();
    if (dn < 1e-10) continue;
    d /= dn;

    double eps = 1.0;
    for (int h = 0; h <= 8; ++h, eps *= 0.5) {
      Eigen::VectorXd qvec = pv + eps * d;
      std::vector<double> qc(qvec.data(), qvec.data() + nb);
      HomPoly q = HomPoly::from_coeff_vector(3, 6, qc, Mode::Numeric);
      if (angle_between(qc, std::vector<double>(pv.data(), pv.data() + nb)) < 1e-6) break;
      if (sphere_floor(q, ++sub) < -1e-8 * coeff_scale(q)) continue;
      if (try_witness(q, qvec, ++sub)) return out;
    }
  }

  out.kind = ExtremalityKind::Inconclusive;
  out.note = "witness search exhausted";
  return out;
}

}  // namespace coneray
