#include "doctest.h"

#include <cmath>
#include <vector>

#include "coneray/corpus.hpp"
#include "coneray/error.hpp"
#include "coneray/extremality.hpp"
#include "coneray/sphere_opt.hpp"

using namespace coneray;

namespace {

HomPoly cl_det() { return corpus("choi-lam").acoustic_matrix().det(); }

HomPoly random_cubic_vanishing_at_e1(Rng& rng) {
  HomPoly c(3, 3);
  for (const Exps& e : monomial_basis(3, 3)) {
    if (e == Exps{3, 0, 0}) continue;  // c(e1) = coeff of y1^3 = 0
    int num = static_cast<int>(rng.raw() % 9) - 4;
    if (num != 0) c.add_term(e, Rational(num));
  }
  return c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Cheap nonnegativity spot-check on the sphere.
void check_nonneg_sampled(const HomPoly& p, uint64_t seed, double tol) {
  Rng rng(seed);
  FlatPoly fp(p);
  for (int i = 0; i < 500; ++i) {
    auto y = rng.unit_vector(3);
    CHECK(fp.eval(y.data()) >= -tol);
  }
}

}  // namespace

TEST_CASE("find_zeros locates the seven zeros of the Choi-Lam determinant") {
  ZeroSet z = find_zeros(cl_det());
  CHECK_FALSE(z.curve_sampled);
  REQUIRE(z.points.size() == 7);
  const double isq3 = 1.0 / std::sqrt(3.0);
  int axis = 0, diag = 0;
  for (size_t i = 0; i < z.points.size(); ++i) {
    const auto& y = z.points[i];
    CHECK(z.residuals[i] <= 1e-9);
    double norm = dot(y, y);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
    // canonical antipodal representative
    for (double c : y) {
      if (std::abs(c) > 1e-6) {
        CHECK(c > 0);
        break;
      }
    }
    int nz = 0;
    for (double c : y) nz += std::abs(c) > 1e-6 ? 1 : 0;
    if (nz == 1) {
      ++axis;
    } else {
      ++diag;
      for (double c : y) CHECK(std::abs(std::abs(c) - isq3) <= 1e-6);
    }
  }
  CHECK(axis == 3);  // e1, e2, e3
  CHECK(diag == 4);  // (1, +-1, +-1)/sqrt(3)
}

TEST_CASE("find_zeros is invariant under scaling the polynomial") {
  ZeroSet a = find_zeros(cl_det());
  ZeroSet b = find_zeros(cl_det().scaled(Rational(5, 2)));
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i)
    for (int k = 0; k < 3; ++k)
      CHECK(a.points[i][k] == doctest::Approx(b.points[i][k]).epsilon(1e-7));
}

TEST_CASE("find_zeros thins a zero curve to a farthest-point sample") {
  HomPoly p(3, 6);  // (y1 y2 y3)^2 vanishes on three great circles
  p.add_term({2, 2, 2}, 1);
  ZeroSet z = find_zeros(p);
  CHECK(z.curve_sampled);
  CHECK(z.points.size() <= 24);
  CHECK(z.points.size() >= 10);
}

TEST_CASE("find_zeros raises on sign-indefinite input") {
  HomPoly p(3, 6);
  p.add_term({6, 0, 0}, 1);
  p.add_term({0, 6, 0}, -1);
  CHECK_THROWS_AS(find_zeros(p), Error);
  try {
    find_zeros(p);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotNonnegative);
  }
}

TEST_CASE("constraint rows annihilate every nonnegative summand") {
  Rng rng(91);
  for (int trial = 0; trial < 100; ++trial) {
    HomPoly c1 = random_cubic_vanishing_at_e1(rng);
    HomPoly c2 = random_cubic_vanishing_at_e1(rng);
    HomPoly q1 = c1 * c1, q2 = c2 * c2;
    HomPoly p = q1 + q2;
    if (p.is_zero()) continue;
    ZeroSet z;
    try {
      z = find_zeros(p, {});
    } catch (const Error&) {
      continue;  // a numeric dip below tolerance; not this test's concern
    }
    if (z.points.empty()) continue;
    ConstraintSystem cs = zero_constraints(p, z);
    CHECK(cs.rows.size() ==
          static_cast<size_t>(cs.rows_value + cs.rows_gradient + cs.rows_hessian));
    CHECK(cs.rows_value >= 1);  // e1 is a zero by construction
    std::vector<double> v1 = q1.coeff_vector(6), v2 = q2.coeff_vector(6);
    double s1 = std::max(1.0, q1.max_abs_coeff());
    double s2 = std::max(1.0, q2.max_abs_coeff());
    for (const auto& row : cs.rows) {
      CHECK(std::abs(dot(row, v1)) <= 1e-6 * s1);
      CHECK(std::abs(dot(row, v2)) <= 1e-6 * s2);
    }
  }
}

TEST_CASE("constraint levels can be disabled selectively") {
  HomPoly p = cl_det();
  ZeroSet z = find_zeros(p);
  ConstraintLevels lv;
  lv.gradient = false;
  lv.hessian_kernel = false;
  ConstraintSystem cs = zero_constraints(p, z, lv);
  CHECK(cs.rows_value == static_cast<int>(z.points.size()));
  CHECK(cs.rows_gradient == 0);
  CHECK(cs.rows_hessian == 0);
}

TEST_CASE("extremality_test: the Choi-Lam determinant is extremal") {
  ExtremalityVerdict v = extremality_test(cl_det());
  CHECK(v.kind == ExtremalityKind::Extremal);
  CHECK(v.kernel_dim == 1);
  CHECK(v.zero_count == 7);
  CHECK(v.membership_residual <= 1e-8);
  CHECK(v.gap_ratio > 10.0);  // the rank decision must not be marginal
}

TEST_CASE("extremality_test: splittable sums are refuted with a verified witness") {
  HomPoly p(3, 6);
  p.add_term({6, 0, 0}, 1);
  p.add_term({0, 6, 0}, 1);
  ExtremalityVerdict v = extremality_test(p);
  REQUIRE(v.kind == ExtremalityKind::NotExtremal);
  REQUIRE_FALSE(v.witness.is_zero());
  CHECK(v.witness_scale > 0);

  // The witness and its complement must both be nonnegative on the sphere.
  check_nonneg_sampled(v.witness, 17, 1e-7);
  HomPoly rest = p.scaled(Rational(rationalize(v.witness_scale, 1e-9))) - v.witness;
  check_nonneg_sampled(rest, 18, 1e-7);

  // And it must be linearly independent of p, i.e. not a scalar multiple.
  Rational pl = p.coeff(v.witness.leading().first);
  bool multiple = false;
  if (pl != 0) {
    Rational lam = v.witness.leading().second / pl;
    multiple = (v.witness == p.scaled(lam));
  }
  CHECK_FALSE(multiple);
}

TEST_CASE("extremality_test: perfect squares short-circuit") {
  HomPoly p(3, 6);
  p.add_term({2, 2, 2}, 1);  // (y1 y2 y3)^2
  ExtremalityVerdict v = extremality_test(p);
  REQUIRE(v.kind == ExtremalityKind::ExtremalByPerfectSquare);
  CHECK(v.square_root * v.square_root == p);
}

TEST_CASE("extremality_test: the ball sextic splits off y1^6") {
  HomPoly r2(3, 2);
  r2.add_term({2, 0, 0}, 1);
  r2.add_term({0, 2, 0}, 1);
  r2.add_term({0, 0, 2}, 1);
  HomPoly p = r2 * r2 * r2;  // strictly positive, no zeros at all
  ExtremalityVerdict v = extremality_test(p);
  REQUIRE(v.kind == ExtremalityKind::NotExtremal);
  CHECK(v.zero_count == 0);
  CHECK(v.witness == HomPoly::monomial(3, {6, 0, 0}, 1));
  CHECK(v.witness_scale > 0);
}

TEST_CASE("extremality_test input validation") {
  CHECK_THROWS_AS(extremality_test(HomPoly::zero(3, 6)), Error);
  CHECK_THROWS_AS(extremality_test(HomPoly::monomial(2, {6, 0}, 1)), Error);
  CHECK_THROWS_AS(extremality_test(HomPoly::monomial(3, {4, 0, 0}, 1)), Error);
  HomPoly neg(3, 6);
  neg.add_term({6, 0, 0}, -1);
  CHECK_THROWS_AS(extremality_test(neg), Error);
}

TEST_CASE("extremality_test is deterministic for a fixed seed") {
  ExtremalityVerdict a = extremality_test(cl_det(), 3);
  ExtremalityVerdict b = extremality_test(cl_det(), 3);
  CHECK(a.kind == b.kind);
  CHECK(a.kernel_dim == b.kernel_dim);
  CHECK(a.membership_residual == b.membership_residual);
  CHECK(a.gap_ratio == b.gap_ratio);
  CHECK(a.singular_values == b.singular_values);
}
