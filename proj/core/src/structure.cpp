#include "coneray/structure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coneray/error.hpp"
#include "coneray/psd.hpp"
#include "coneray/sphere_opt.hpp"

namespace coneray {
namespace {

void require_exact(const PolyMatrix& m, const char* who) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).exact())
        fail(Errc::ModeError, std::string(who) + ": exact-mode entries required");
}

HomPoly constant_poly(int nvars, const Rational& c) {
  return HomPoly::monomial(nvars, Exps(nvars, 0), c);
}

// num == ratio * den for a rational constant, if one exists
std::optional<Rational> constant_ratio(const HomPoly& num, const HomPoly& den) {
  if (num.is_zero()) return Rational(0);
  if (den.is_zero()) return std::nullopt;
  const auto& lead = den.leading();
  Rational r = num.coeff(lead.first) / lead.second;
  if (r == 0) return std::nullopt;
  if (num == den.scaled(r)) return r;
  return std::nullopt;
}

}  // namespace

Rank1Factorization rank1_factor_polymatrix(const PolyMatrix& a) {
  require_exact(a, "rank1_factor_polymatrix");
  const int m = a.rows(), n = a.cols();
  if (m < 1 || n < 1) fail(Errc::DimensionMismatch, "rank1_factor_polymatrix: empty matrix");
  if (a.entry_degree() % 2 != 0)
    fail(Errc::PreconditionViolated, "rank1_factor_polymatrix: even entry degree required");

  for (int i = 0; i < m; ++i)
    for (int k = i + 1; k < m; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = j + 1; l < n; ++l) {
          HomPoly minor = a.at(i, j) * a.at(k, l) - a.at(i, l) * a.at(k, j);
          if (!minor.is_zero()) {
            std::ostringstream os;
            os << "rank1_factor_polymatrix: nonzero 2x2 minor at rows (" << i << "," << k
               << ") cols (" << j << "," << l << "): " << minor.str();
            fail(Errc::RankExceeded, os.str());
          }
        }

  Rank1Factorization out;
  const int nv = a.at(0, 0).nvars();
  const int deg = a.entry_degree();
  out.b.assign(m, HomPoly::zero(nv, 0));
  out.c.assign(n, HomPoly::zero(nv, 0));

  bool zero = true;
  for (int i = 0; i < m && zero; ++i)
    for (int j = 0; j < n && zero; ++j) zero = a.at(i, j).is_zero();
  if (zero) {
    out.verified = true;
    return out;
  }

  // Symmetric matrices with a perfect-square pivot diagonal get the balanced
  // split b = c, which is what the downstream square certificates want.
  bool balanced = false;
  if (m == n && a.is_symmetric()) {
    int p = -1;
    for (int i = 0; i < m && p < 0; ++i)
      if (!a.at(i, i).is_zero()) p = i;
    if (p >= 0) {
      auto s = perfect_square_test(a.at(p, p));
      if (s && s->exact()) {
        balanced = true;
        for (int i = 0; i < m; ++i) {
          if (a.at(p, i).is_zero()) {
            out.b[i] = HomPoly::zero(nv, deg / 2);
            continue;
          }
          auto q = poly_divide(a.at(p, i), *s);
          if (!q) {
            balanced = false;
            break;
          }
          out.b[i] = *q;
        }
        if (balanced) out.c = out.b;
      }
    }
  }

  if (!balanced) {
    int j0 = -1;
    for (int j = 0; j < n && j0 < 0; ++j)
      for (int i = 0; i < m; ++i)
        if (!a.at(i, j).is_zero()) {
          j0 = j;
          break;
        }
    // column content: gcd of the nonzero entries of the pivot column
    HomPoly g;
    bool have = false;
    for (int i = 0; i < m; ++i) {
      if (a.at(i, j0).is_zero()) continue;
      g = have ? poly_gcd(g, a.at(i, j0)) : poly_gcd(a.at(i, j0), a.at(i, j0));
      have = true;
    }
    for (int i = 0; i < m; ++i) {
      if (a.at(i, j0).is_zero()) {
        out.b[i] = HomPoly::zero(nv, a.entry_degree() - g.degree());
        continue;
      }
      auto q = poly_divide(a.at(i, j0), g);
      if (!q) fail(Errc::Internal, "rank1_factor_polymatrix: content does not divide its column");
      out.b[i] = *q;
    }
    int i0 = -1;
    for (int i = 0; i < m && i0 < 0; ++i)
      if (!out.b[i].is_zero()) i0 = i;
    for (int j = 0; j < n; ++j) {
      if (a.at(i0, j).is_zero()) {
        out.c[j] = HomPoly::zero(nv, g.degree());
        continue;
      }
      auto q = poly_divide(a.at(i0, j) * g, a.at(i0, j0));
      if (!q) fail(Errc::Internal, "rank1_factor_polymatrix: cross division failed");
      out.c[j] = *q;
    }
  }

  // deterministic sign: first nonzero b gets a positive leading coefficient
  for (int i = 0; i < m; ++i) {
    if (out.b[i].is_zero()) continue;
    if (out.b[i].leading().second < 0) {
      for (auto& p : out.b) p = -p;
      for (auto& p : out.c) p = -p;
    }
    break;
  }

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (out.b[i] * out.c[j] != a.at(i, j))
        fail(Errc::Internal, "rank1_factor_polymatrix: reconstruction mismatch");
  out.verified = true;
  return out;
}

RowCombination row_combination_coeffs(const PolyMatrix& s, int pivot) {
  require_exact(s, "row_combination_coeffs");
  if (s.rows() != 3 || s.cols() != 3)
    fail(Errc::DimensionMismatch, "row_combination_coeffs: 3x3 matrix required");
  if (!s.is_symmetric())
    fail(Errc::PreconditionViolated, "row_combination_coeffs: symmetric matrix required");
  if (pivot < 0 || pivot > 2) fail(Errc::InputError, "row_combination_coeffs: pivot out of range");
  if (!s.det().is_zero())
    fail(Errc::NonzeroDeterminant, "row_combination_coeffs: determinant must vanish identically");

  RowCombination out;
  out.pivot = pivot;
  out.u = pivot == 0 ? 1 : 0;
  out.v = pivot == 2 ? 1 : 2;

  HomPoly cpp = s.cofactor(pivot, pivot);
  if (cpp.is_zero())
    fail(Errc::DegenerateCofactor, "row_combination_coeffs: pivot diagonal cofactor vanishes");
  HomPoly cup = s.cofactor(out.u, pivot);
  HomPoly cvp = s.cofactor(out.v, pivot);

  // adjugate identity: the pivot column of the cofactor matrix annihilates S
  for (int j = 0; j < 3; ++j) {
    HomPoly lhs = cup * s.at(out.u, j) + cvp * s.at(out.v, j) + cpp * s.at(pivot, j);
    if (!lhs.is_zero()) fail(Errc::Internal, "row_combination_coeffs: adjugate identity failed");
  }
  out.verified = true;

  const int nv = s.at(0, 0).nvars();
  auto reduce = [&](const HomPoly& num_raw, HomPoly& num, HomPoly& den) {
    if (num_raw.is_zero()) {
      num = HomPoly::zero(nv, 0);
      den = constant_poly(nv, Rational(1));
      return;
    }
    HomPoly g = poly_gcd(num_raw, cpp);
    num = *poly_divide(num_raw, g);
    den = *poly_divide(cpp, g);
    if (den.leading().second < 0) {
      num = -num;
      den = -den;
    }
  };
  reduce(-cup, out.r_num, out.r_den);
  reduce(-cvp, out.q_num, out.q_den);
  return out;
}

std::optional<Rational> marcellini_ratio(const QuadForm& q1, const QuadForm& q2) {
  if (q1.n() != q2.n()) fail(Errc::DimensionMismatch, "marcellini_ratio: variable counts differ");
  if (q2.positive_index() == 0 || q2.negative_index() == 0)
    fail(Errc::NotIndefinite, "marcellini_ratio: q2 must be indefinite");

  const int n = q2.n();
  const QuadDiag& dg = q2.diagonalization();
  const int rank = dg.rank;
  int ip = -1, in = -1;
  for (int i = 0; i < rank; ++i) {
    if (dg.d[i] > 0 && ip < 0) ip = i;
    if (dg.d[i] < 0 && in < 0) in = i;
  }

  Eigen::MatrixXd L(rank, n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < n; ++j) L(i, j) = to_double(dg.forms[i].coeffs[j]);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(L);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
  Eigen::MatrixXd ker = lu.kernel();  // n x (n - rank), or a zero column
  bool has_kernel = lu.dimensionOfKernel() > 0;

  std::vector<double> dd(rank);
  for (int i = 0; i < rank; ++i) dd[i] = to_double(dg.d[i]);

  double scale = std::max(1.0, q1.poly().max_abs_coeff());
  Rng rng(0x6d61726365ULL);
  int accepted = 0;
  for (int attempt = 0; attempt < 400 && accepted < 50; ++attempt) {
    // random point of the zero set in diagonal coordinates: solve for the
    // ip-th coordinate, growing the in-th one until the radicand is positive
    std::vector<double> u(rank);
    for (int i = 0; i < rank; ++i) u[i] = i == ip ? 0.0 : rng.gaussian() * 0.5;
    if (std::abs(u[in]) < 0.3) u[in] = u[in] < 0 ? -0.3 : 0.3;
    double rad = -1.0;
    for (int grow = 0; grow < 80; ++grow) {
      double s = 0.0;
      for (int i = 0; i < rank; ++i)
        if (i != ip) s += dd[i] * u[i] * u[i];
      rad = -s / dd[ip];
      if (rad > 0.0) break;
      u[in] *= 2.0;
    }
    if (rad <= 0.0) continue;
    u[ip] = (attempt % 2 == 0 ? 1.0 : -1.0) * std::sqrt(rad);

    Eigen::VectorXd uv(rank);
    for (int i = 0; i < rank; ++i) uv(i) = u[i];
    Eigen::VectorXd y = cod.solve(uv);
    if (has_kernel)
      for (int k = 0; k < ker.cols(); ++k) y += rng.gaussian() * 0.5 * ker.col(k);
    double yn = y.norm();
    if (yn < 1e-8) continue;
    y /= yn;

    std::vector<double> yd(y.data(), y.data() + n);
    if (std::abs(q1.poly().eval(yd)) > 1e-10 * scale) return std::nullopt;
    ++accepted;
  }
  if (accepted < 50)
    fail(Errc::Internal, "marcellini_ratio: could not sample the zero set");

  // least-squares ratio over Gram coefficients, then exact verification
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n * n; ++i) {
    double a = to_double(q1.gram()[i]);
    double b = to_double(q2.gram()[i]);
    num += a * b;
    den += b * b;
  }
  Rational lambda = rationalize(num / den);
  if (q1.poly() == q2.poly().scaled(lambda)) return lambda;
  return std::nullopt;
}

SignWitnesses lemma44_sign_witnesses(const QuadForm& q, const std::vector<double>& z0,
                                     double radius) {
  const int n = q.n();
  if (static_cast<int>(z0.size()) != n)
    fail(Errc::DimensionMismatch, "lemma44_sign_witnesses: point size mismatch");
  if (q.positive_index() == 0 || q.negative_index() == 0)
    fail(Errc::NotIndefinite, "lemma44_sign_witnesses: indefinite form required");
  if (radius <= 0.0) fail(Errc::InputError, "lemma44_sign_witnesses: positive radius required");

  double scale = std::max(1.0, q.poly().max_abs_coeff());
  if (std::abs(q.poly().eval(z0)) > 1e-10 * scale)
    fail(Errc::NotAZero, "lemma44_sign_witnesses: z0 is not a zero of q");

  SymMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g.set(i, j, to_double(q.gram()[static_cast<size_t>(i) * n + j]));
  std::vector<double> ev;
  std::vector<std::vector<double>> evec;
  sym_eig(g, ev, evec);

  auto hunt = [&](bool positive) -> std::pair<std::vector<Rational>, Rational> {
    const std::vector<double>& v = positive ? evec[n - 1] : evec[0];
    // pick the sign that makes the first-order term help the target sign
    double lin = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lin += 2.0 * z0[i] * g.at(i, j) * v[j];
    double sgn = positive ? (lin >= 0 ? 1.0 : -1.0) : (lin <= 0 ? 1.0 : -1.0);

    double delta = radius;
    for (int k = 0; k < 60; ++k, delta *= 0.5) {
      std::vector<Rational> p(n);
      for (int i = 0; i < n; ++i) p[i] = rationalize(z0[i] + sgn * delta * v[i]);
      Rational val = q.poly().eval(p);
      if (positive ? val > 0 : val < 0) return {p, val};
    }
    fail(Errc::Internal, "lemma44_sign_witnesses: no strict sign within radius");
  };

  SignWitnesses out;
  auto pos = hunt(true);
  auto neg = hunt(false);
  out.p_pos = std::move(pos.first);
  out.value_pos = pos.second;
  out.p_neg = std::move(neg.first);
  out.value_neg = neg.second;
  return out;
}

StructuredForm structured_form_detect(const PolyMatrix& t) {
  require_exact(t, "structured_form_detect");
  if (t.rows() != 3 || t.cols() != 3)
    fail(Errc::DimensionMismatch, "structured_form_detect: 3x3 matrix required");
  if (!t.is_symmetric())
    fail(Errc::PreconditionViolated, "structured_form_detect: symmetric matrix required");
  if (!t.det().is_zero())
    fail(Errc::PreconditionViolated, "structured_form_detect: determinant must vanish");
  for (int j = 0; j < 3; ++j)
    if (!t.cofactor(2, j).is_zero())
      fail(Errc::PreconditionViolated,
           "structured_form_detect: third cofactor row must vanish");

  StructuredForm out;
  const HomPoly& t00 = t.at(0, 0);
  if (t00.is_zero()) return out;

  // scalar-multiple template: every block entry a rational multiple of t00
  auto alpha = constant_ratio(t.at(0, 1), t00);
  auto beta = constant_ratio(t.at(0, 2), t00);
  if (alpha && beta && t.at(1, 1) == t00.scaled(*alpha * *alpha) &&
      t.at(1, 2) == t00.scaled(*alpha * *beta)) {
    out.kind = StructuredForm::Kind::Form36;
    out.p = t00;
    out.q = t.at(2, 2);
    out.alpha = *alpha;
    out.beta = *beta;
    return out;
  }

  // linear-product template: t00 = l1^2 with rational l1, rows divided out
  QuadClassification cls = quad_classify(t00);
  if (cls.kind == QuadKind::SquareOfLinear && cls.l1) {
    if (auto root = rational_sqrt(cls.scale)) {
      HomPoly l1 = cls.l1->to_poly().scaled(*root);
      auto l2 = poly_divide(t.at(0, 1), l1);
      auto l3 = poly_divide(t.at(0, 2), l1);
      if (l2 && l3 && t.at(1, 1) == *l2 * *l2 && t.at(1, 2) == *l2 * *l3) {
        out.kind = StructuredForm::Kind::Form37;
        out.l1 = l1;
        out.l2 = *l2;
        out.l3 = *l3;
        out.q = t.at(2, 2);
        return out;
      }
    }
  }
  return out;
}

}  // namespace coneray
