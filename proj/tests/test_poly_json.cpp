#include "doctest.h"

#include "json.hpp"

#include "coneray/corpus.hpp"
#include "coneray/error.hpp"
#include "coneray/poly_json.hpp"
#include "coneray/sphere_opt.hpp"

using namespace coneray;
using nlohmann::json;

namespace {

HomPoly random_poly(Rng& rng, int nvars, int degree) {
  HomPoly p(nvars, degree);
  for (const Exps& e : monomial_basis(nvars, degree)) {
    int num = static_cast<int>(rng.raw() % 13) - 6;
    if (num != 0) p.add_term(e, Rational(num, 1 + static_cast<int>(rng.raw() % 5)));
  }
  return p;
}

}  // namespace

TEST_CASE("exact polynomial round-trip is the identity") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    HomPoly p = random_poly(rng, 3, 2 + static_cast<int>(rng.raw() % 5));
    HomPoly back = poly_from_json(poly_to_json(p));
    CHECK(back == p);
    CHECK(back.mode() == Mode::Exact);
    CHECK(back.nvars() == p.nvars());
    CHECK(back.degree() == p.degree());
  }
  // The zero polynomial keeps its shape through the trip.
  HomPoly z = poly_from_json(poly_to_json(HomPoly::zero(4, 3)));
  CHECK(z.is_zero());
  CHECK(z.nvars() == 4);
  CHECK(z.degree() == 3);
}

TEST_CASE("term order in the emitted JSON is leading-first") {
  HomPoly p(3, 6);
  p.add_term({2, 2, 2}, -3);
  p.add_term({4, 2, 0}, 1);
  json j = json::parse(poly_to_json(p));
  REQUIRE(j["terms"].size() == 2);
  CHECK(j["terms"][0]["exp"] == json::array({4, 2, 0}));
  CHECK(j["terms"][0]["coeff"] == "1");
  CHECK(j["terms"][1]["exp"] == json::array({2, 2, 2}));
  CHECK(j["terms"][1]["coeff"] == "-3");
  CHECK(j["nvars"] == 3);
  CHECK(j["degree"] == 6);
}

TEST_CASE("numeric polynomials serialize floats and parse back tainted") {
  HomPoly p(2, 2);
  p.add_term({2, 0}, Rational(1, 3));
  p.taint_numeric();
  std::string text = poly_to_json(p);
  json j = json::parse(text);
  CHECK(j["terms"][0]["coeff"].is_number());
  HomPoly back = poly_from_json(text);
  CHECK(back.mode() == Mode::Numeric);
  std::vector<double> y = {1.0, 0.0};
  CHECK(back.eval(y) == doctest::Approx(p.eval(y)).epsilon(1e-12));
}

TEST_CASE("parser accepts rational strings and numbers mixed") {
  HomPoly p = poly_from_json(R"({"nvars":2,"degree":2,
    "terms":[{"exp":[2,0],"coeff":"3/2"},{"exp":[0,2],"coeff":0.5}]})");
  CHECK(p.mode() == Mode::Numeric);  // any float taints the result
  std::vector<double> y = {1.0, 1.0};
  CHECK(p.eval(y) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("malformed polynomial JSON raises InputError") {
  const char* bad[] = {
      "not json",
      R"({"nvars":2,"degree":2})",
      R"({"nvars":2,"degree":2,"terms":[{"exp":[1],"coeff":"1"}]})",
      R"({"nvars":2,"degree":2,"terms":[{"exp":[1,2],"coeff":"1"}]})",
      R"({"nvars":2,"degree":2,"terms":[{"exp":[2,0],"coeff":"1/0"}]})",
  };
  for (const char* text : bad) {
    CHECK_THROWS_AS(poly_from_json(text), Error);
  }
}

TEST_CASE("tensor round-trip preserves every orbit") {
  for (const char* name : {"choi-lam", "diag-convex", "null-lagrangian(1,1,2,2)", "remark25"}) {
    ElastTensor c = corpus(name);
    ElastTensor back = tensor_from_json(tensor_to_json(c));
    CHECK(back == c);
    CHECK(back.dim() == c.dim());
  }
}

TEST_CASE("tensor JSON uses 1-based indices and one entry per orbit") {
  ElastTensor c(3);
  c.set(0, 1, 2, 0, Rational(5, 7));
  json j = json::parse(tensor_to_json(c));
  CHECK(j["d"] == 3);
  REQUIRE(j["entries"].size() == 1);
  auto e = j["entries"][0];
  int i = e["i"], jj = e["j"], k = e["k"], l = e["l"];
  CHECK(e["value"] == "5/7");
  CHECK((i >= 1 && i <= 3));
  // The emitted quadruple must lie on the orbit of (1,2,3,1).
  auto orbit = ElastTensor::orbit(0, 1, 2, 0);
  bool found = false;
  for (const auto& o : orbit)
    found = found || (o[0] == i - 1 && o[1] == jj - 1 && o[2] == k - 1 && o[3] == l - 1);
  CHECK(found);
}

TEST_CASE("tensor parser honors the strict flag") {
  // Conflicting claims for one orbit: mean without strict, error with it.
  std::string base = R"({"d":2,"entries":[
      {"i":1,"j":1,"k":1,"l":1,"value":"1"},
      {"i":1,"j":1,"k":1,"l":1,"value":"3"}],"strict":)";
  ElastTensor relaxed = tensor_from_json(base + "false}");
  CHECK(relaxed.at(0, 0, 0, 0) == 2);
  CHECK_THROWS_AS(tensor_from_json(base + "true}"), Error);
}

TEST_CASE("malformed tensor JSON raises InputError") {
  CHECK_THROWS_AS(tensor_from_json("[]"), Error);
  CHECK_THROWS_AS(tensor_from_json(R"({"d":3})"), Error);
  CHECK_THROWS_AS(tensor_from_json(R"({"d":9,"entries":[]})"), Error);
  CHECK_THROWS_AS(tensor_from_json(
                      R"({"d":2,"entries":[{"i":0,"j":1,"k":1,"l":1,"value":"1"}]})"),
                  Error);
}
