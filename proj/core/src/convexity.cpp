#include "coneray/convexity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coneray/error.hpp"
#include "coneray/gram_family.hpp"
#include "coneray/psd.hpp"
#include "coneray/sphere_opt.hpp"

namespace coneray {
namespace {

int pair_count(int d) { return d * (d + 1) / 2; }

// Index of the unordered pair (i, k), i <= k, in lexicographic order.
int pair_index(int d, int i, int k) {
  // pairs (0,0)..(0,d-1), (1,1)..(1,d-1), ...
  return i * d - i * (i - 1) / 2 + (k - i);
}

// Coefficient vector of the acoustic matrix T(y)_ik = sum G[(ij),(kl)] y_j y_l
// on the grid (i <= k) x (j <= l).  Two Gram representatives of the same form
// produce the same vector, so this is the canonical target for reconstruction
// checks: null-Lagrangian shifts drop out.
std::vector<double> form_acoustic_vec(const BiquadraticForm& f) {
  const int dx = f.dx(), dy = f.dy();
  std::vector<double> v(static_cast<size_t>(pair_count(dx)) * pair_count(dy), 0.0);
  for (int i = 0; i < dx; ++i)
    for (int k = i; k < dx; ++k)
      for (int j = 0; j < dy; ++j)
        for (int l = j; l < dy; ++l) {
          Rational c = f.coeff(i, j, k, l);
          if (j < l) c += f.coeff(i, l, k, j);
          v[static_cast<size_t>(pair_index(dx, i, k)) * pair_count(dy) +
            pair_index(dy, j, l)] = to_double(c);
        }
  return v;
}

// Same vector for sum_r (sum_ij rows[r][i*dy+j] x_i y_j)^2.
std::vector<double> squares_acoustic_vec(int dx, int dy,
                                         const std::vector<std::vector<double>>& rows) {
  std::vector<double> v(static_cast<size_t>(pair_count(dx)) * pair_count(dy), 0.0);
  for (const auto& r : rows)
    for (int i = 0; i < dx; ++i)
      for (int k = i; k < dx; ++k)
        for (int j = 0; j < dy; ++j)
          for (int l = j; l < dy; ++l) {
            double t = r[i * dy + j] * r[k * dy + l];
            if (j < l) t += r[i * dy + l] * r[k * dy + j];
            v[static_cast<size_t>(pair_index(dx, i, k)) * pair_count(dy) +
              pair_index(dy, j, l)] += t;
          }
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Gauss-Newton polish of square rows against the acoustic target.  The
// residual is quadratic in the rows, so a handful of steps drives the spectral
// truncation error of gram_to_squares down to roundoff.
void refine_squares(std::vector<std::vector<double>>& rows, int dx, int dy,
                    const std::vector<double>& target) {
  if (rows.empty()) return;
  const int m = static_cast<int>(target.size());
  const int per = dx * dy;
  const int nv = static_cast<int>(rows.size()) * per;
  double scale = 1.0;
  for (double t : target) scale = std::max(scale, std::abs(t));

  auto defect = [&](const std::vector<std::vector<double>>& rr) {
    return max_abs_diff(squares_acoustic_vec(dx, dy, rr), target);
  };

  double best = defect(rows);
  for (int iter = 0; iter < 20 && best > 1e-15 * scale; ++iter) {
    std::vector<double> model = squares_acoustic_vec(dx, dy, rows);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, nv);
    Eigen::VectorXd res(m);
    for (int t = 0; t < m; ++t) res(t) = model[t] - target[t];
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      const auto& v = rows[r];
      auto col = [&](int i, int j) { return r * per + i * dy + j; };
      for (int i = 0; i < dx; ++i)
        for (int k = i; k < dx; ++k)
          for (int j = 0; j < dy; ++j)
            for (int l = j; l < dy; ++l) {
              int row = pair_index(dx, i, k) * pair_count(dy) + pair_index(dy, j, l);
              jac(row, col(i, j)) += v[k * dy + l];
              jac(row, col(k, l)) += v[i * dy + j];
              if (j < l) {
                jac(row, col(i, l)) += v[k * dy + j];
                jac(row, col(k, j)) += v[i * dy + l];
              }
            }
    }
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    jtj.diagonal().array() += 1e-12 * (1.0 + jtj.diagonal().maxCoeff());
    Eigen::VectorXd step = jtj.ldlt().solve(-jac.transpose() * res);

    // step halving until the max-norm defect improves
    bool moved = false;
    double alpha = 1.0;
    for (int h = 0; h < 30; ++h) {
      auto trial = rows;
      for (int r = 0; r < static_cast<int>(rows.size()); ++r)
        for (int t = 0; t < per; ++t) trial[r][t] += alpha * step(r * per + t);
      double d = defect(trial);
      if (d < best) {
        rows = std::move(trial);
        best = d;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
}

// Sparse view of a shift direction; entries are dyadic (0, +-1/2, +-1) so the
// double -> Rational conversion below is exact.
struct DirTriplets {
  std::vector<int> a, b;
  std::vector<double> v;
};

DirTriplets sparsify(const SymMatrix& d) {
  DirTriplets t;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (d.at(i, j) != 0.0) {
        t.a.push_back(i);
        t.b.push_back(j);
        t.v.push_back(d.at(i, j));
      }
  return t;
}

// Rationalize the shift coefficients at increasing denominator caps and try an
// exact LDL split of the shifted Gram matrix.  Success gives a certificate
// with residual literally zero.
std::optional<SosCertificate> exact_ladder(const BiquadraticForm& f,
                                           const std::vector<SymMatrix>& dirs,
                                           const std::vector<double>& c_float,
                                           const std::string& route) {
  const int dx = f.dx(), dy = f.dy();
  const int n = dx * dy;
  std::vector<DirTriplets> sparse;
  sparse.reserve(dirs.size());
  for (const auto& d : dirs) sparse.push_back(sparsify(d));

  static const BigInt caps[] = {BigInt(1),       BigInt(16),
                                BigInt(256),     BigInt(10000),
                                BigInt(1000000), BigInt("1000000000000")};
  std::vector<Rational> prev;
  for (const BigInt& cap : caps) {
    std::vector<Rational> c(c_float.size());
    for (size_t i = 0; i < c_float.size(); ++i) c[i] = rationalize_capped(c_float[i], cap);
    if (c == prev) continue;  // same rounding as the previous cap
    prev = c;

    std::vector<Rational> g = f.gram();
    for (size_t k = 0; k < sparse.size(); ++k) {
      if (c[k] == 0) continue;
      const DirTriplets& t = sparse[k];
      for (size_t e = 0; e < t.v.size(); ++e)
        g[static_cast<size_t>(t.a[e]) * n + t.b[e]] += c[k] * Rational(t.v[e]);
    }
    auto split = rational_psd_decompose(g, n);
    if (!split) continue;

    SosCertificate cert;
    cert.dx = dx;
    cert.dy = dy;
    cert.route = route;
    cert.exact = true;
    cert.residual = 0.0;
    cert.exact_squares = std::move(*split);
    cert.minor_coeffs.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i) cert.minor_coeffs[i] = to_double(c[i]);
    for (const auto& [w, v] : cert.exact_squares) {
      double sw = std::sqrt(to_double(w));
      SosSquare sq;
      sq.matrix.assign(dx, std::vector<double>(dy, 0.0));
      for (int i = 0; i < dx; ++i)
        for (int j = 0; j < dy; ++j) sq.matrix[i][j] = sw * to_double(v[i * dy + j]);
      cert.squares.push_back(std::move(sq));
    }
    return cert;
  }
  return std::nullopt;
}

SosCertificate float_certificate(const BiquadraticForm& f,
                                 const std::vector<SymMatrix>& dirs,
                                 const std::vector<double>& c_float,
                                 const std::string& route) {
  const int dx = f.dx(), dy = f.dy();
  const int n = dx * dy;
  SymMatrix g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) g.set(a, b, to_double(f.gram()[static_cast<size_t>(a) * n + b]));
  for (size_t k = 0; k < dirs.size(); ++k)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        if (dirs[k].at(a, b) != 0.0) g.add(a, b, c_float[k] * dirs[k].at(a, b));

  // A boundary-feasible slice can sit a hair below zero; shift it onto the
  // cone and let the polish below absorb the perturbation.
  PsdVerdict pv = psd_check(g, 0.0);
  if (pv.lambda_min < 0.0)
    for (int a = 0; a < n; ++a) g.add(a, a, -pv.lambda_min);

  double scale = std::max(1.0, g.max_abs());
  std::vector<std::vector<double>> rows = gram_to_squares(g, 1e-10 * scale);
  std::vector<double> target = form_acoustic_vec(f);
  refine_squares(rows, dx, dy, target);

  SosCertificate cert;
  cert.dx = dx;
  cert.dy = dy;
  cert.route = route;
  cert.minor_coeffs = c_float;
  cert.residual = max_abs_diff(squares_acoustic_vec(dx, dy, rows), target);
  for (const auto& r : rows) {
    SosSquare sq;
    sq.matrix.assign(dx, std::vector<double>(dy, 0.0));
    for (int i = 0; i < dx; ++i)
      for (int j = 0; j < dy; ++j) sq.matrix[i][j] = r[i * dy + j];
    cert.squares.push_back(std::move(sq));
  }
  return cert;
}

SosCertificate build_certificate(const BiquadraticForm& f,
                                 const std::vector<SymMatrix>& dirs,
                                 const std::vector<double>& c_float,
                                 const std::string& route) {
  if (auto ex = exact_ladder(f, dirs, c_float, route)) return *ex;
  return float_certificate(f, dirs, c_float, route);
}

// ---------------------------------------------------------------------------
// rank-one minimization: projected gradient descent on y -> lambda_min(T(y))

// T(y)_ik = y^T blocks[ik] y with each block symmetric; the eigenvector x of
// T(y) then gives the gradient d lambda / d y_j = 2 (x^T blocks x) y.
class AcousticEig {
 public:
  explicit AcousticEig(const BiquadraticForm& f) : dx_(f.dx()), dy_(f.dy()) {
    blocks_.assign(static_cast<size_t>(dx_) * dx_,
                   std::vector<double>(static_cast<size_t>(dy_) * dy_, 0.0));
    for (int i = 0; i < dx_; ++i)
      for (int k = 0; k < dx_; ++k)
        for (int j = 0; j < dy_; ++j)
          for (int l = 0; l < dy_; ++l)
            blocks_[static_cast<size_t>(i) * dx_ + k][static_cast<size_t>(j) * dy_ + l] =
                0.5 * (to_double(f.coeff(i, j, k, l)) + to_double(f.coeff(i, l, k, j)));
  }

  // smallest eigenpair of T(y)
  void eig(const std::vector<double>& y, double& lam, std::vector<double>& x) const {
    SymMatrix t(dx_);
    for (int i = 0; i < dx_; ++i)
      for (int k = i; k < dx_; ++k) {
        const auto& blk = blocks_[static_cast<size_t>(i) * dx_ + k];
        double s = 0.0;
        for (int j = 0; j < dy_; ++j)
          for (int l = 0; l < dy_; ++l) s += blk[static_cast<size_t>(j) * dy_ + l] * y[j] * y[l];
        t.set(i, k, s);
      }
    PsdVerdict pv = psd_check(t, 0.0);
    lam = pv.lambda_min;
    x = pv.witness;
  }

  std::vector<double> grad(const std::vector<double>& x, const std::vector<double>& y) const {
    std::vector<double> g(dy_, 0.0);
    for (int i = 0; i < dx_; ++i)
      for (int k = 0; k < dx_; ++k) {
        double w = x[i] * x[k];
        if (w == 0.0) continue;
        const auto& blk = blocks_[static_cast<size_t>(i) * dx_ + k];
        for (int j = 0; j < dy_; ++j) {
          double s = 0.0;
          for (int l = 0; l < dy_; ++l) s += blk[static_cast<size_t>(j) * dy_ + l] * y[l];
          g[j] += 2.0 * w * s;
        }
      }
    return g;
  }

 private:
  int dx_, dy_;
  std::vector<std::vector<double>> blocks_;
};

struct RankOnePoint {
  std::vector<double> x, y;
  double value = std::numeric_limits<double>::infinity();
};

void normalize_inplace(std::vector<double>& v) {
  double n = 0.0;
  for (double t : v) n += t * t;
  n = std::sqrt(n);
  if (n > 0.0) {
    for (double& t : v) t /= n;
  } else {
    v[0] = 1.0;
  }
}

RankOnePoint acoustic_min(const BiquadraticForm& f, int starts, int iters, uint64_t seed) {
  const int dy = f.dy();
  AcousticEig ac(f);
  Rng rng(seed);
  double scale = std::max(1.0, f.max_abs_entry());

  RankOnePoint best;
  for (int s = 0; s < starts; ++s) {
    std::vector<double> y;
    if (s < dy) {  // coordinate axes first, then the diagonal, then random
      y.assign(dy, 0.0);
      y[s] = 1.0;
    } else if (s == dy) {
      y.assign(dy, 1.0 / std::sqrt(static_cast<double>(dy)));
    } else {
      y = rng.unit_vector(dy);
    }

    double lam;
    std::vector<double> x;
    ac.eig(y, lam, x);
    double step = 0.5;
    for (int it = 0; it < iters; ++it) {
      std::vector<double> g = ac.grad(x, y);
      double gy = 0.0;
      for (int j = 0; j < dy; ++j) gy += g[j] * y[j];
      double gn = 0.0;
      for (int j = 0; j < dy; ++j) {
        g[j] -= gy * y[j];  // tangent component
        gn += g[j] * g[j];
      }
      gn = std::sqrt(gn);
      if (gn <= 1e-13 * scale) break;

      bool moved = false;
      for (int h = 0; h < 45 && !moved; ++h) {
        std::vector<double> y2(dy);
        for (int j = 0; j < dy; ++j) y2[j] = y[j] - step * g[j];
        normalize_inplace(y2);
        double lam2;
        std::vector<double> x2;
        ac.eig(y2, lam2, x2);
        if (lam2 < lam) {
          y = std::move(y2);
          x = std::move(x2);
          lam = lam2;
          step *= 1.5;
          moved = true;
        } else {
          step *= 0.5;
        }
      }
      if (!moved) break;
    }
    if (lam < best.value) {
      best.value = lam;
      best.x = x;
      best.y = y;
    }
  }
  return best;
}

// 12-digit rationalization with near-zero snapping, for exact re-evaluation
// of a float witness.
std::vector<Rational> rationalize_vector(const std::vector<double>& v) {
  std::vector<Rational> out(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out[i] = std::abs(v[i]) < 1e-9 ? Rational(0) : rationalize(v[i]);
  return out;
}

}  // namespace

const char* qc_kind_name(QcKind k) {
  switch (k) {
    case QcKind::CertifiedQuasiconvex: return "CertifiedQuasiconvex";
    case QcKind::NumericQuasiconvex: return "NumericQuasiconvex";
    case QcKind::NotQuasiconvex: return "NotQuasiconvex";
    case QcKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* polyconvexity_kind_name(PolyconvexityResult::Kind k) {
  switch (k) {
    case PolyconvexityResult::Kind::Polyconvex: return "Polyconvex";
    case PolyconvexityResult::Kind::NotPolyconvex: return "NotPolyconvex";
    case PolyconvexityResult::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

double certificate_residual(const BiquadraticForm& f, const SosCertificate& cert) {
  if (cert.dx != f.dx() || cert.dy != f.dy())
    fail(Errc::DimensionMismatch, "certificate_residual: certificate shape does not match form");
  std::vector<std::vector<double>> rows;
  for (const auto& sq : cert.squares) {
    std::vector<double> r(static_cast<size_t>(f.dx()) * f.dy());
    for (int i = 0; i < f.dx(); ++i)
      for (int j = 0; j < f.dy(); ++j) r[static_cast<size_t>(i) * f.dy() + j] = sq.matrix[i][j];
    rows.push_back(std::move(r));
  }
  return max_abs_diff(squares_acoustic_vec(f.dx(), f.dy(), rows), form_acoustic_vec(f));
}

QcVerdict quasiconvexity_test(const ElastTensor& c, const QcOptions& opts) {
  const int d = c.dim();
  if (d != 3 && d != 4)
    fail(Errc::UnsupportedDimension, "quasiconvexity_test handles dimensions 3 and 4");

  BiquadraticForm f = BiquadraticForm::from_tensor(c);
  double scale = std::max(1.0, f.max_abs_entry());

  QcVerdict out;
  out.starts = opts.starts;
  std::ostringstream note;

  RankOnePoint m = acoustic_min(f, opts.starts, opts.iters, opts.seed);
  out.min_value = m.value;

  if (m.value < -opts.tol * scale) {
    std::vector<Rational> xr = rationalize_vector(m.x);
    std::vector<Rational> yr = rationalize_vector(m.y);
    Rational ev = c.eval_rank_one(xr, yr);
    if (ev < 0) {
      out.kind = QcKind::NotQuasiconvex;
      out.x = m.x;
      out.y = m.y;
      out.exact_value = ev;
      out.witness_exact = true;
      out.certification_note = "negative rank-one value confirmed in exact arithmetic";
      return out;
    }
    note << "float minimum " << m.value << " failed exact re-evaluation; ";
  }

  if (opts.try_certification) {
    for (int r = 0; r <= 1; ++r) {
      if (r == 1 && d > 3) {
        note << "r=1 skipped (Gram side " << d * d * (d + 1) * (d + 1) / 4
             << " exceeds the solver cap); ";
        continue;
      }
      GramFamily fam = multiplier_family(f, r);
      AffinePsdProblem pb;
      pb.base = fam.base;
      double s = std::max(1.0, pb.base.max_abs());
      for (double& v : pb.base.a) v /= s;
      pb.directions = fam.dirs;
      pb.tolerance = opts.tol;
      pb.seed = opts.seed;
      SliceResult sl = max_min_eig(pb);
      note << "r=" << r << ": " << slice_status_name(sl.status) << " (t*=" << sl.t_star
           << "); ";
      if (sl.status == SliceStatus::Feasible) {
        out.kind = QcKind::CertifiedQuasiconvex;
        out.multiplier_level = r;
        out.certification_note = note.str();
        return out;
      }
    }
  }

  out.kind = m.value >= -opts.tol * scale ? QcKind::NumericQuasiconvex : QcKind::Inconclusive;
  out.certification_note = note.str();
  return out;
}

PolyconvexityResult polyconvexity_test(const ElastTensor& c, uint64_t seed) {
  if (c.dim() != 3)
    fail(Errc::UnsupportedDimension, "polyconvexity_test handles dimension 3 only");

  BiquadraticForm f = BiquadraticForm::from_tensor(c);
  GramFamily fam = minor_shift_family(f);

  AffinePsdProblem pb;
  pb.base = fam.base;
  double s = std::max(1.0, pb.base.max_abs());
  for (double& v : pb.base.a) v /= s;
  pb.directions = fam.dirs;
  pb.seed = seed;
  SliceResult sl = max_min_eig(pb);

  PolyconvexityResult res;
  res.slice = sl;
  res.t_star_normalized = sl.t_star;
  res.t_star = sl.t_star * s;

  switch (sl.status) {
    case SliceStatus::Feasible: {
      res.kind = PolyconvexityResult::Kind::Polyconvex;
      std::vector<double> c_unnorm = sl.c_star;
      for (double& v : c_unnorm) v *= s;
      res.certificate = build_certificate(f, fam.dirs, c_unnorm, "minor-shift");
      break;
    }
    case SliceStatus::Infeasible:
      res.kind = PolyconvexityResult::Kind::NotPolyconvex;
      break;
    case SliceStatus::Stalled:
      res.kind = PolyconvexityResult::Kind::Inconclusive;
      break;
  }
  return res;
}

SosCertificate terpstra_sos_2xn(const BiquadraticForm& g, uint64_t seed) {
  if (g.dx() != 2 || g.dy() < 1 || g.dy() > 3)
    fail(Errc::UnsupportedDimension, "terpstra_sos_2xn handles 2 x n forms with n <= 3");

  GramFamily fam = minor_shift_family(g);
  AffinePsdProblem pb;
  pb.base = fam.base;
  double s = std::max(1.0, pb.base.max_abs());
  for (double& v : pb.base.a) v /= s;
  pb.directions = fam.dirs;
  pb.seed = seed;
  SliceResult sl = max_min_eig(pb);

  if (sl.status == SliceStatus::Infeasible)
    fail(Errc::NotNonnegative,
         "2 x n Gram slice is infeasible; a nonnegative 2 x n form always has one");
  if (sl.status == SliceStatus::Stalled)
    fail(Errc::CertificateNotFound, "Gram solver stalled on a 2 x n form");

  std::vector<double> c_unnorm = sl.c_star;
  for (double& v : c_unnorm) v *= s;
  return build_certificate(g, fam.dirs, c_unnorm, "terpstra-2xn");
}

}  // namespace coneray
