#include "doctest.h"

#include <vector>

#include "coneray/corpus.hpp"
#include "coneray/error.hpp"
#include "coneray/sphere_opt.hpp"
#include "coneray/structure.hpp"

using namespace coneray;

namespace {

HomPoly linear(std::initializer_list<Rational> coeffs) {
  HomPoly p(3, 1);
  int i = 0;
  for (const Rational& c : coeffs) {
    Exps e(3, 0);
    e[i++] = 1;
    if (c != 0) p.add_term(e, c);
  }
  return p;
}

HomPoly random_linear(Rng& rng) {
  HomPoly p(3, 1);
  for (int i = 0; i < 3; ++i) {
    int num = static_cast<int>(rng.raw() % 9) - 4;
    if (num != 0) {
      Exps e(3, 0);
      e[i] = 1;
      p.add_term(e, Rational(num));
    }
  }
  return p;
}

HomPoly quad(std::initializer_list<std::pair<Exps, Rational>> terms) {
  HomPoly p(3, 2);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

// Symmetric matrix l l^T + m m^T, identically singular since its rank is 2.
PolyMatrix two_dyads(const std::vector<HomPoly>& l, const std::vector<HomPoly>& m) {
  PolyMatrix t(3, 3, 3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.set(i, j, l[i] * l[j] + m[i] * m[j]);
  return t;
}

}  // namespace

TEST_CASE("rank1_factor_polymatrix reconstructs a product grid exactly") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<HomPoly> b, c;
    for (int i = 0; i < 2; ++i) b.push_back(random_linear(rng));
    for (int j = 0; j < 3; ++j) c.push_back(random_linear(rng));
    PolyMatrix a(2, 3, 3, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) a.set(i, j, b[i] * c[j]);
    Rank1Factorization f = rank1_factor_polymatrix(a);
    REQUIRE(f.verified);
    REQUIRE(f.b.size() == 2);
    REQUIRE(f.c.size() == 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) CHECK(f.b[i] * f.c[j] == a.at(i, j));
  }
}

TEST_CASE("rank1_factor_polymatrix balances symmetric input") {
  std::vector<HomPoly> c = {linear({1, 2, 0}), linear({0, 1, -1}), linear({Rational(1, 2), 0, 3})};
  PolyMatrix a(3, 3, 3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.set(i, j, c[i] * c[j]);
  Rank1Factorization f = rank1_factor_polymatrix(a);
  REQUIRE(f.verified);
  for (int i = 0; i < 3; ++i) CHECK(f.b[i] == f.c[i]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(f.b[i] * f.c[j] == a.at(i, j));
}

TEST_CASE("rank1_factor_polymatrix rejects rank-2 input with a witness minor") {
  PolyMatrix a(2, 2, 3, 2);
  a.set(0, 0, quad({{{2, 0, 0}, 1}}));
  a.set(1, 1, quad({{{0, 2, 0}, 1}}));
  CHECK_THROWS_AS(rank1_factor_polymatrix(a), Error);
  try {
    rank1_factor_polymatrix(a);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RankExceeded);
  }
}

TEST_CASE("row_combination_coeffs satisfies the cross-multiplied identity") {
  Rng rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<HomPoly> l, m;
    for (int i = 0; i < 3; ++i) {
      l.push_back(random_linear(rng));
      m.push_back(random_linear(rng));
    }
    PolyMatrix t = two_dyads(l, m);
    RowCombination rc;
    try {
      rc = row_combination_coeffs(t);
    } catch (const Error& e) {
      // Degenerate draws (e.g. proportional dyads) are legitimately refused.
      CHECK((e.code() == Errc::DegenerateCofactor || e.code() == Errc::NonzeroDeterminant));
      continue;
    }
    REQUIRE(rc.verified);
    CHECK(rc.pivot == 2);
    CHECK_FALSE(rc.r_den.is_zero());
    CHECK_FALSE(rc.q_den.is_zero());
    for (int j = 0; j < 3; ++j) {
      HomPoly lhs = t.at(rc.pivot, j) * rc.r_den * rc.q_den;
      HomPoly rhs = rc.r_num * rc.q_den * t.at(rc.u, j) + rc.q_num * rc.r_den * t.at(rc.v, j);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("row_combination_coeffs handles constant coefficients") {
  // Third row is 2*row1 - row2 by construction: l = (y1, y2, 2y1 - y2).
  std::vector<HomPoly> l = {linear({1, 0, 0}), linear({0, 1, 0}), linear({2, -1, 0})};
  std::vector<HomPoly> m = {linear({0, 0, 1}), linear({1, 1, 0}), linear({-1, -1, 2})};
  // rows of l l^T + m m^T: row3 = 2*row1 - row2 holds entrywise because the
  // third components of both dyad vectors are that combination of the others.
  PolyMatrix t = two_dyads(l, m);
  RowCombination rc = row_combination_coeffs(t);
  REQUIRE(rc.verified);
  CHECK(rc.r_den.degree() == 0);
  CHECK(rc.q_den.degree() == 0);
  Rational r = rc.r_num.coeff(Exps{0, 0, 0}) / rc.r_den.coeff(Exps{0, 0, 0});
  Rational q = rc.q_num.coeff(Exps{0, 0, 0}) / rc.q_den.coeff(Exps{0, 0, 0});
  CHECK(r == 2);
  CHECK(q == -1);
}

TEST_CASE("row_combination_coeffs error paths") {
  PolyMatrix full(3, 3, 3, 2);
  full.set(0, 0, quad({{{2, 0, 0}, 1}}));
  full.set(1, 1, quad({{{0, 2, 0}, 1}}));
  full.set(2, 2, quad({{{0, 0, 2}, 1}}));
  CHECK_THROWS_AS(row_combination_coeffs(full), Error);
  try {
    row_combination_coeffs(full);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonzeroDeterminant);
  }

  PolyMatrix corner(3, 3, 3, 2);
  corner.set(0, 0, quad({{{2, 0, 0}, 1}}));
  CHECK_THROWS_AS(row_combination_coeffs(corner), Error);
  try {
    row_combination_coeffs(corner);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateCofactor);
  }
}

TEST_CASE("marcellini_ratio recovers the exact proportionality constant") {
  QuadForm q2(quad({{{2, 0, 0}, 1}, {{0, 2, 0}, -1}}));
  QuadForm q1(quad({{{2, 0, 0}, Rational(-3, 2)}, {{0, 2, 0}, Rational(3, 2)}}));
  auto r = marcellini_ratio(q1, q2);
  REQUIRE(r.has_value());
  CHECK(*r == Rational(-3, 2));
}

TEST_CASE("marcellini_ratio refuses non-proportional pairs") {
  QuadForm q2(quad({{{2, 0, 0}, 1}, {{0, 2, 0}, -1}}));
  QuadForm other(quad({{{2, 0, 0}, 1}, {{0, 2, 0}, 1}}));
  CHECK_FALSE(marcellini_ratio(other, q2).has_value());

  // The sampled form must be indefinite, otherwise its zero set is too thin.
  CHECK_THROWS_AS(marcellini_ratio(q2, other), Error);
  try {
    marcellini_ratio(q2, other);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotIndefinite);
  }
}

TEST_CASE("lemma44_sign_witnesses produces strict exact signs near a zero") {
  QuadForm q(quad({{{2, 0, 0}, 1}, {{0, 2, 0}, -1}}));
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<double> z0 = {s, s, 0.0};
  SignWitnesses w = lemma44_sign_witnesses(q, z0, 0.1);
  REQUIRE(w.p_neg.size() == 3);
  REQUIRE(w.p_pos.size() == 3);
  CHECK(w.value_neg < 0);
  CHECK(w.value_pos > 0);
  CHECK(q.poly().eval(w.p_neg) == w.value_neg);
  CHECK(q.poly().eval(w.p_pos) == w.value_pos);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(to_double(w.p_neg[i]) - z0[i]) <= 0.1 + 1e-12);
    CHECK(std::abs(to_double(w.p_pos[i]) - z0[i]) <= 0.1 + 1e-12);
  }
}

TEST_CASE("lemma44_sign_witnesses validates its hypotheses") {
  QuadForm indef(quad({{{2, 0, 0}, 1}, {{0, 2, 0}, -1}}));
  QuadForm definite(quad({{{2, 0, 0}, 1}, {{0, 2, 0}, 1}}));
  std::vector<double> z0 = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
  CHECK_THROWS_AS(lemma44_sign_witnesses(definite, z0, 0.1), Error);
  CHECK_THROWS_AS(lemma44_sign_witnesses(indef, {1.0, 0.0, 0.0}, 0.1), Error);  // not a zero
  CHECK_THROWS_AS(lemma44_sign_witnesses(indef, z0, 0.0), Error);
}

TEST_CASE("structured_form_detect: scalar-multiple block template") {
  HomPoly pq = quad({{{2, 0, 0}, 1}, {{0, 2, 0}, 1}});
  HomPoly qq = quad({{{0, 0, 2}, 1}, {{1, 1, 0}, 1}});
  Rational alpha(2), beta(-1, 2);
  PolyMatrix t(3, 3, 3, 2);
  t.set(0, 0, pq);
  t.set(0, 1, pq.scaled(alpha));
  t.set(1, 0, pq.scaled(alpha));
  t.set(0, 2, pq.scaled(beta));
  t.set(2, 0, pq.scaled(beta));
  t.set(1, 1, pq.scaled(alpha * alpha));
  t.set(1, 2, pq.scaled(alpha * beta));
  t.set(2, 1, pq.scaled(alpha * beta));
  t.set(2, 2, qq);
  StructuredForm sf = structured_form_detect(t);
  REQUIRE(sf.kind == StructuredForm::Kind::Form36);
  CHECK(sf.p == pq);
  CHECK(sf.alpha == alpha);
  CHECK(sf.beta == beta);
  CHECK(sf.q == qq);
}

TEST_CASE("structured_form_detect: pairwise-product template") {
  HomPoly l1 = linear({1, 0, 0});
  HomPoly l2 = linear({0, 1, 0});
  HomPoly l3 = linear({1, 0, 1});
  HomPoly qq = quad({{{0, 0, 2}, 3}});
  PolyMatrix t(3, 3, 3, 2);
  t.set(0, 0, l1 * l1);
  t.set(0, 1, l1 * l2);
  t.set(1, 0, l1 * l2);
  t.set(0, 2, l1 * l3);
  t.set(2, 0, l1 * l3);
  t.set(1, 1, l2 * l2);
  t.set(1, 2, l2 * l3);
  t.set(2, 1, l2 * l3);
  t.set(2, 2, qq);
  StructuredForm sf = structured_form_detect(t);
  REQUIRE(sf.kind == StructuredForm::Kind::Form37);
  // The linear triple is determined up to a global sign.
  bool plus = (sf.l1 == l1);
  HomPoly e1 = plus ? sf.l1 : -sf.l1;
  HomPoly e2 = plus ? sf.l2 : -sf.l2;
  HomPoly e3 = plus ? sf.l3 : -sf.l3;
  CHECK(e1 == l1);
  CHECK(e2 == l2);
  CHECK(e3 == l3);
  CHECK(sf.q == qq);
}

TEST_CASE("structured_form_detect: singular but non-template input does not match") {
  // l l^T + m m^T with kernel (1, -1, 0): the third cofactor row vanishes,
  // yet the top-left block is neither a scalar-multiple grid nor a product
  // grid of linear forms.
  std::vector<HomPoly> l = {linear({1, 0, 0}), linear({1, 0, 0}), linear({0, 1, 0})};
  std::vector<HomPoly> m = {linear({0, 0, 1}), linear({0, 0, 1}), linear({1, 0, 0})};
  StructuredForm sf = structured_form_detect(two_dyads(l, m));
  CHECK(sf.kind == StructuredForm::Kind::NotStructured);
}

TEST_CASE("structured_form_detect enforces its preconditions") {
  // A nonsingular acoustic matrix is outside the template's domain.
  CHECK_THROWS_AS(structured_form_detect(corpus("choi-lam").acoustic_matrix()), Error);
  try {
    structured_form_detect(corpus("choi-lam").acoustic_matrix());
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PreconditionViolated);
  }
}

TEST_CASE("numeric mode is refused by the exact factorizers") {
  PolyMatrix a(2, 2, 3, 2);
  HomPoly e = quad({{{2, 0, 0}, 1}});
  e.taint_numeric();
  a.set(0, 0, e);
  CHECK_THROWS_AS(rank1_factor_polymatrix(a), Error);
}
