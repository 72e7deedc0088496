#include "coneray/corpus.hpp"

#include <algorithm>
#include <cctype>

#include "coneray/error.hpp"
#include "coneray/hompoly.hpp"

namespace coneray {

namespace {

// Quadratic forms on d x d matrix entries, as polynomials in d^2 variables
// with the row-major flat index xi_ab -> a*d + b (0-based).
void add_sq(HomPoly& p, int d, int a, int b, const Rational& c) {
  Exps e(d * d, 0);
  e[a * d + b] = 2;
  p.add_term(e, c);
}

void add_cross(HomPoly& p, int d, int a, int b, int c, int dd,
               const Rational& coeff) {
  Exps e(d * d, 0);
  e[a * d + b] += 1;
  e[c * d + dd] += 1;
  p.add_term(e, coeff);
}

// The Choi-Lam form, entered with the two matrix index roles swapped relative
// to the usual display: the squares sit at entries (2,1), (3,2), (1,3) rather
// than (1,2), (2,3), (3,1).  With this reading the y-matrix determinant is
//   y1^4 y2^2 + y2^4 y3^2 + y3^4 y1^2 - 3 y1^2 y2^2 y3^2,
// the classical extremal sextic; the untransposed reading cycles the variable
// roles in that determinant instead.
HomPoly choi_lam_poly(int d) {
  HomPoly f = HomPoly::zero(d * d, 2);
  for (int k = 0; k < 3; ++k) add_sq(f, d, k, k, 1);
  add_sq(f, d, 1, 0, 1);
  add_sq(f, d, 2, 1, 1);
  add_sq(f, d, 0, 2, 1);
  add_cross(f, d, 0, 0, 1, 1, -2);
  add_cross(f, d, 1, 1, 2, 2, -2);
  add_cross(f, d, 2, 2, 0, 0, -2);
  return f;
}

struct ParsedName {
  std::string base;
  std::vector<int> args;
};

ParsedName parse_name(const std::string& name) {
  ParsedName out;
  auto open = name.find('(');
  if (open == std::string::npos) {
    out.base = name;
    return out;
  }
  if (name.back() != ')') {
    fail(Errc::InputError, "malformed corpus name '" + name + "'");
  }
  out.base = name.substr(0, open);
  std::string inner = name.substr(open + 1, name.size() - open - 2);
  size_t pos = 0;
  while (pos <= inner.size()) {
    size_t comma = inner.find(',', pos);
    std::string tok = inner.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      fail(Errc::InputError, "bad corpus argument '" + tok + "'");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size()) {
      fail(Errc::InputError, "bad corpus argument '" + tok + "'");
    }
    out.args.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<CorpusEntry> corpus_list() {
  return {
      {"choi-lam",
       "Choi-Lam nonnegative biquadratic, the canonical extreme ray (d=3)"},
      {"diag-convex",
       "sum of squared diagonal entries, convex and polyconvex (d=3)"},
      {"null-lagrangian(1,1,2,2)",
       "2x2 minor xi_ij*xi_kl - xi_il*xi_kj; symmetrizes to the zero tensor"},
      {"single-square", "xi_11^2, polyconvex with zero determinant (d=3)"},
      {"remark24(4)",
       "Choi-Lam plus squared diagonal entries xi_kk^2 for k=3..d"},
      {"remark25",
       "two overlapping Choi-Lam patterns in d=4, weak but not strong extremal"},
      {"cl-plus-square44",
       "Choi-Lam embedded in d=4 plus xi_44^2; determinant gains a y4^2 factor"},
  };
}

ElastTensor corpus(const std::string& name) {
  ParsedName pn = parse_name(name);
  const std::string& base = pn.base;
  const auto& args = pn.args;

  auto want_args = [&](size_t n) {
    if (args.size() != n && !(n > 0 && args.empty())) {
      fail(Errc::InputError,
           "corpus name '" + base + "' takes " + std::to_string(n) +
               " arguments");
    }
  };

  if (base == "choi-lam") {
    want_args(0);
    return ElastTensor::from_form(choi_lam_poly(3));
  }
  if (base == "diag-convex") {
    want_args(0);
    HomPoly f = HomPoly::zero(9, 2);
    for (int k = 0; k < 3; ++k) add_sq(f, 3, k, k, 1);
    return ElastTensor::from_form(f);
  }
  if (base == "null-lagrangian") {
    want_args(4);
    int i = 1, j = 1, k = 2, l = 2;
    if (!args.empty()) {
      i = args[0];
      j = args[1];
      k = args[2];
      l = args[3];
    }
    int d = std::max({3, i, j, k, l});
    if (i < 1 || j < 1 || k < 1 || l < 1 || d > 4 || i == k || j == l) {
      fail(Errc::InputError,
           "null-lagrangian needs distinct rows i!=k and columns j!=l in 1..4");
    }
    HomPoly f = HomPoly::zero(d * d, 2);
    add_cross(f, d, i - 1, j - 1, k - 1, l - 1, 1);
    add_cross(f, d, i - 1, l - 1, k - 1, j - 1, -1);
    return ElastTensor::from_form(f);
  }
  if (base == "single-square") {
    want_args(0);
    HomPoly f = HomPoly::zero(9, 2);
    add_sq(f, 3, 0, 0, 1);
    return ElastTensor::from_form(f);
  }
  if (base == "remark24") {
    want_args(1);
    int d = args.empty() ? 4 : args[0];
    if (d < 3 || d > 4) {
      fail(Errc::InputError, "remark24 dimension must be 3 or 4");
    }
    HomPoly f = choi_lam_poly(d);
    for (int k = 2; k < d; ++k) add_sq(f, d, k, k, 1);
    return ElastTensor::from_form(f);
  }
  if (base == "remark25") {
    want_args(0);
    const int d = 4;
    HomPoly f = choi_lam_poly(d);
    // second copy shifted to rows/columns 2..4; the off-pattern square sits
    // at (1,4), not (2,4)
    for (int k = 1; k < 4; ++k) add_sq(f, d, k, k, 1);
    add_sq(f, d, 2, 1, 1);
    add_sq(f, d, 3, 2, 1);
    add_sq(f, d, 0, 3, 1);
    add_cross(f, d, 1, 1, 2, 2, -2);
    add_cross(f, d, 2, 2, 3, 3, -2);
    add_cross(f, d, 3, 3, 1, 1, -2);
    return ElastTensor::from_form(f);
  }
  if (base == "cl-plus-square44") {
    want_args(0);
    HomPoly f = choi_lam_poly(4);
    add_sq(f, 4, 3, 3, 1);
    return ElastTensor::from_form(f);
  }
  fail(Errc::InputError, "unknown corpus name '" + name + "'");
}

}  // namespace coneray
