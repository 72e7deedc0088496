// End-to-end classification: verdicts, the zero-determinant certificate
// ladder, and the JSON report surface.

#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "coneray/biquadratic.hpp"
#include "coneray/classifier.hpp"
#include "coneray/convexity.hpp"
#include "coneray/corpus.hpp"
#include "coneray/elast_tensor.hpp"
#include "coneray/error.hpp"
#include "coneray/hompoly.hpp"
#include "coneray/report_json.hpp"
#include "coneray/sphere_opt.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace coneray;

namespace {

HomPoly mono3(int a, int b, int c, const Rational& v) {
  return HomPoly::monomial(3, Exps{a, b, c}, v);
}

// (sum_ij r[i*3+j] xi_ij)^2 as a 9-variable quadratic.
HomPoly square_of(const std::array<int, 9>& r) {
  HomPoly p = HomPoly::zero(9, 2, Mode::Exact);
  for (int a = 0; a < 9; ++a)
    for (int b = a; b < 9; ++b) {
      if (r[a] == 0 || r[b] == 0) continue;
      Exps e(9, 0);
      e[a] += 1;
      e[b] += 1;
      p.add_term(e, Rational(r[a] * r[b] * (a == b ? 1 : 2)));
    }
  return p;
}

// Tensor of sum_k (sum_ij rows[k][i*3+j] x_i y_j)^2.
ElastTensor tensor_from_rows(const std::vector<std::array<int, 9>>& rows) {
  HomPoly f = HomPoly::zero(9, 2, Mode::Exact);
  for (const auto& r : rows) f = f + square_of(r);
  return ElastTensor::from_form(f);
}

HomPoly choi_lam_det() {
  HomPoly d = mono3(4, 2, 0, Rational(1));
  d = d + mono3(0, 4, 2, Rational(1));
  d = d + mono3(2, 0, 4, Rational(1));
  d = d + mono3(2, 2, 2, Rational(-3));
  return d;
}

// An exact certificate must reproduce the acoustic matrix literally.
void check_exact_reconstruction(const ElastTensor& c, const SosCertificate& cert) {
  REQUIRE(cert.exact);
  CHECK(cert.residual == 0.0);
  BiquadraticForm rebuilt(3, 3, Mode::Exact);
  for (const auto& [w, row] : cert.exact_squares) rebuilt.add_bilinear_square(w, row);
  CHECK(rebuilt.y_matrix() == c.acoustic_matrix());
}

void check_float_residual(const ElastTensor& c, const SosCertificate& cert) {
  const BiquadraticForm f = BiquadraticForm::from_tensor(c);
  CHECK(certificate_residual(f, cert) <= 1e-8 * std::max(1.0, f.max_abs_entry()));
}

bool is_hex16(const std::string& s) {
  if (s.size() != 16) return false;
  for (char ch : s)
    if (!std::isxdigit(static_cast<unsigned char>(ch)) ||
        (std::isalpha(static_cast<unsigned char>(ch)) && !std::islower(static_cast<unsigned char>(ch))))
      return false;
  return true;
}

}  // namespace

TEST_CASE("classify labels the corpus extreme-ray example") {
  ClassifyOptions opts;
  opts.seed = 7;
  const ClassificationReport rep = classify(corpus("choi-lam"), opts);

  CHECK(rep.verdict == Verdict::ExtremeRay);
  CHECK(rep.reason == InconclusiveReason::None);
  CHECK(rep.det_status.kind == DetStatus::Kind::ExtremalNonSquare);
  CHECK(rep.det_status.det == choi_lam_det());
  CHECK(rep.quasiconvexity.kind != QcKind::NotQuasiconvex);
  CHECK_FALSE(rep.certificate.has_value());
  CHECK_FALSE(rep.polyconvexity.has_value());

  REQUIRE(rep.extremality.has_value());
  CHECK(rep.extremality->kind == ExtremalityKind::Extremal);
  CHECK(rep.extremality->kernel_dim == 1);
  CHECK(rep.extremality->zero_count == 7);

  CHECK(is_hex16(rep.input_digest));

  // report surface: fixed key set, no certificate, extremality evidence
  const auto j = nlohmann::ordered_json::parse(report_to_json(rep));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"verdict", "det_status", "quasiconvexity",
                                         "certificate", "evidence"});
  CHECK(j["verdict"] == "ExtremeRay");
  CHECK(j["det_status"]["kind"] == "ExtremalNonSquare");
  CHECK(j["certificate"].is_null());
  CHECK(j["det_status"]["det"]["terms"][0]["exp"] == nlohmann::ordered_json::array({4, 2, 0}));
  CHECK(j["det_status"]["det"]["terms"][0]["coeff"] == "1");
  CHECK(j["evidence"]["extremality"]["kernel_dim"] == 1);
  CHECK(j["evidence"]["extremality"]["gap_ratio"].is_number());
  CHECK_FALSE(j["evidence"].contains("reason"));
}

TEST_CASE("classify certifies the diagonal example with an exact square root") {
  ClassifyOptions opts;
  opts.seed = 11;
  const ElastTensor c = corpus("diag-convex");
  const ClassificationReport rep = classify(c, opts);

  CHECK(rep.verdict == Verdict::Polyconvex);
  CHECK(rep.det_status.kind == DetStatus::Kind::PerfectSquare);
  CHECK(rep.det_status.det == mono3(2, 2, 2, Rational(1)));
  CHECK(rep.det_status.square_root == mono3(1, 1, 1, Rational(1)));
  CHECK(rep.det_status.square_root * rep.det_status.square_root == rep.det_status.det);

  REQUIRE(rep.polyconvexity.has_value());
  CHECK(rep.polyconvexity->kind == PolyconvexityResult::Kind::Polyconvex);
  CHECK(rep.polyconvexity->t_star >= -1e-7);

  REQUIRE(rep.certificate.has_value());
  CHECK(rep.certificate->route == "minor-shift");
  check_float_residual(c, *rep.certificate);

  // certificate squares reproduce the form on rank-one points
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x = rng.unit_vector(3), y = rng.unit_vector(3);
    double sos = 0.0;
    for (const auto& sq : rep.certificate->squares) {
      double b = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b += sq.matrix[i][j] * x[i] * y[j];
      sos += b * b;
    }
    CHECK(std::abs(sos - c.eval_rank_one(x, y)) <= 1e-7);
  }

  const auto j = nlohmann::ordered_json::parse(report_to_json(rep));
  CHECK(j["verdict"] == "Polyconvex");
  CHECK(j["det_status"]["square_root"]["terms"][0]["exp"] ==
        nlohmann::ordered_json::array({1, 1, 1}));
  CHECK(j["certificate"].is_object());
  CHECK(j["evidence"]["polyconvexity"]["kind"] == "Polyconvex");

  // same seed, same bytes
  CHECK(report_to_json(classify(c, opts)) == report_to_json(rep));
}

TEST_CASE("zero_det_sos picks the advertised route for each input shape") {
  SUBCASE("zero acoustic diagonal, one active row") {
    const ElastTensor c = corpus("single-square");
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "zero-diagonal");
    check_exact_reconstruction(c, cert);
  }

  SUBCASE("zero acoustic diagonal, two active rows") {
    const ElastTensor c = tensor_from_rows({{1, 0, 0, 0, 0, 0, 0, 0, 0},
                                            {0, 0, 0, 0, 1, 0, 0, 0, 0}});
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "zero-diagonal");
    check_exact_reconstruction(c, cert);
  }

  SUBCASE("constant-ratio template behind a vanishing cofactor row") {
    // (x1 + x2 + 2 x3)^2 (y1^2 + y2^2) + (x3 y3)^2
    const ElastTensor c = tensor_from_rows({{1, 0, 0, 1, 0, 0, 2, 0, 0},
                                            {0, 1, 0, 0, 1, 0, 0, 2, 0},
                                            {0, 0, 0, 0, 0, 0, 0, 0, 1}});
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "structured-form36");
    check_exact_reconstruction(c, cert);

    // end to end: still a polyconvexity verdict with the same certificate
    ClassifyOptions opts;
    opts.seed = 3;
    const ClassificationReport rep = classify(c, opts);
    CHECK(rep.verdict == Verdict::Polyconvex);
    CHECK(rep.det_status.kind == DetStatus::Kind::IdenticallyZero);
    REQUIRE(rep.certificate.has_value());
    CHECK(rep.certificate->route == "structured-form36");
  }

  SUBCASE("rank-one top block behind a vanishing cofactor row") {
    // (x1 y1 + x2 y2 + x3 y3)^2 + (x3 y1)^2
    const ElastTensor c = tensor_from_rows({{1, 0, 0, 0, 1, 0, 0, 0, 1},
                                            {0, 0, 0, 0, 0, 0, 1, 0, 0}});
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "structured-form37");
    check_exact_reconstruction(c, cert);
  }

  SUBCASE("pivot row is a constant combination of the other two") {
    // squares (y1 (x1 + 2 x3) + y2 (x2 - x3))^2 and the (y2, y3) copy
    const ElastTensor c = tensor_from_rows({{1, 0, 0, 0, 1, 0, 2, -1, 0},
                                            {0, 1, 0, 0, 0, 1, 0, 2, -1}});
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "case1-constant");
    if (cert.exact) {
      check_exact_reconstruction(c, cert);
    } else {
      check_float_residual(c, cert);
    }
  }

  SUBCASE("pivot row needs polynomial combination coefficients") {
    // (y1 x1 + y2 x3)^2 + (y1 x2 + y3 x3)^2: x3 row = (y2 row1 + y3 row2)/y1
    const ElastTensor c = tensor_from_rows({{1, 0, 0, 0, 0, 0, 0, 1, 0},
                                            {0, 0, 0, 1, 0, 0, 0, 0, 1}});
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "case2-linear");
    check_exact_reconstruction(c, cert);
  }

  SUBCASE("numeric-tainted input falls through to the Gram solver") {
    ElastTensor c = tensor_from_rows({{1, 0, 0, 0, 0, 0, 0, 1, 0},
                                      {0, 0, 0, 1, 0, 0, 0, 0, 1}});
    c.taint_numeric();
    const SosCertificate cert = zero_det_sos(c, 3);
    CHECK(cert.route == "sdp-fallback");
    check_float_residual(c, cert);
  }
}

TEST_CASE("classify reports the case no decision branch covers") {
  // T = diag(y1^2, y2^2, y1^2 + y2^2): det splits off a nonnegative summand
  const ElastTensor c = tensor_from_rows({{1, 0, 0, 0, 0, 0, 0, 0, 0},
                                          {0, 0, 0, 0, 1, 0, 0, 0, 0},
                                          {0, 0, 0, 0, 0, 0, 1, 0, 0},
                                          {0, 0, 0, 0, 0, 0, 0, 1, 0}});
  ClassifyOptions opts;
  opts.seed = 5;
  const ClassificationReport rep = classify(c, opts);

  CHECK(rep.verdict == Verdict::Inconclusive);
  CHECK(rep.reason == InconclusiveReason::TheoremSilent);
  CHECK(rep.det_status.kind == DetStatus::Kind::NotExtremal);
  CHECK(rep.det_status.det == mono3(4, 2, 0, Rational(1)) + mono3(2, 4, 0, Rational(1)));
  REQUIRE(rep.extremality.has_value());
  CHECK(rep.extremality->kind == ExtremalityKind::NotExtremal);
  CHECK(rep.det_status.witness == rep.extremality->witness);
  CHECK(rep.det_status.witness == mono3(4, 2, 0, Rational(1)));
  CHECK(rep.extremality->witness_scale > 0.0);

  const auto j = nlohmann::ordered_json::parse(report_to_json(rep));
  CHECK(j["verdict"] == "Inconclusive");
  CHECK(j["evidence"]["reason"] == "TheoremSilent");
  CHECK(j["det_status"]["witness"]["terms"][0]["exp"] ==
        nlohmann::ordered_json::array({4, 2, 0}));

  CHECK(report_to_json(classify(c, opts)) == report_to_json(rep));
}

TEST_CASE("a strictly positive determinant also lands in the silent case") {
  // identity-like tensor: T = |y|^2 I, det = |y|^6, no zeros at all
  std::vector<std::array<int, 9>> rows;
  for (int a = 0; a < 9; ++a) {
    std::array<int, 9> r{};
    r[a] = 1;
    rows.push_back(r);
  }
  ClassifyOptions opts;
  opts.seed = 9;
  const ClassificationReport rep = classify(tensor_from_rows(rows), opts);

  CHECK(rep.verdict == Verdict::Inconclusive);
  CHECK(rep.reason == InconclusiveReason::TheoremSilent);
  REQUIRE(rep.extremality.has_value());
  CHECK(rep.extremality->zero_count == 0);
  CHECK(rep.extremality->witness == mono3(6, 0, 0, Rational(1)));

  // an empty constraint system has no singular-value gap to report
  const auto j = nlohmann::ordered_json::parse(report_to_json(rep));
  CHECK(j["evidence"]["extremality"]["gap_ratio"].is_null());
  CHECK(j["evidence"]["extremality"]["zero_count"] == 0);
}

TEST_CASE("classify rejects tensors outside the cone") {
  HomPoly f = HomPoly::zero(9, 2, Mode::Exact);
  f.add_term(Exps{2, 0, 0, 0, 0, 0, 0, 0, 0}, Rational(-1));
  const ElastTensor c = ElastTensor::from_form(f);
  try {
    classify(c, {});
    FAIL("expected a NotInCone error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotInCone);
    CHECK(std::string(e.what()).find("not in the cone") != std::string::npos);
  }
}

TEST_CASE("classification entry points enforce their domains") {
  CHECK_THROWS_AS(classify(corpus("remark24"), {}), Error);       // dimension 4
  CHECK_THROWS_AS(zero_det_sos(corpus("remark24"), 0), Error);    // dimension 4
  CHECK_THROWS_AS(zero_det_sos(corpus("choi-lam"), 0), Error);    // det != 0

  try {
    zero_det_sos(corpus("choi-lam"), 0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PreconditionViolated);
  }
  try {
    classify(corpus("remark24"), {});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedDimension);
  }
}

TEST_CASE("sos_certificate dispatches on the determinant") {
  CHECK(sos_certificate(corpus("single-square"), 0).route == "zero-diagonal");
  CHECK(sos_certificate(corpus("diag-convex"), 0).route == "minor-shift");

  // not polyconvex: no certificate exists and the front door says so
  try {
    sos_certificate(corpus("choi-lam"), 0);
    FAIL("expected CertificateNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CertificateNotFound);
  }
}

TEST_CASE("reported determinants agree with direct numeric evaluation") {
  for (const char* name : {"choi-lam", "diag-convex"}) {
    const ElastTensor c = corpus(name);
    const PolyMatrix t = c.acoustic_matrix();
    const HomPoly det = t.det();

    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> y(3);
      for (double& v : y) v = rng.gaussian();
      double m[3][3];
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m[i][k] = t.at(i, k).eval(y);
      const double sarrus = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      const double scale = std::max(1.0, std::abs(sarrus));
      CHECK(std::abs(det.eval(y) - sarrus) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("input digests distinguish tensors and stay stable") {
  ClassifyOptions opts;
  opts.seed = 1;
  const std::string d1 = classify(corpus("diag-convex"), opts).input_digest;
  const std::string d2 = classify(corpus("single-square"), opts).input_digest;
  CHECK(is_hex16(d1));
  CHECK(is_hex16(d2));
  CHECK(d1 != d2);
  CHECK(classify(corpus("diag-convex"), opts).input_digest == d1);
}
