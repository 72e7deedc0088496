#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coneray/rational.hpp"

namespace coneray {

// Exponent vector of a monomial; entry i is the power of variable i.
using Exps = std::vector<int>;

inline int total_degree(const Exps& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Graded lexicographic order, leading term first: higher total degree wins,
// ties broken by the first variable with a larger exponent. The variable
// order (y1 before y2 before y3) is fixed project-wide; the leading term of
// the Choi-Lam determinant under this order is y1^4 y2^2.
struct GradedLexGreater {
  bool operator()(const Exps& a, const Exps& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;  // vector<int> lexicographic
  }
};

enum class Mode { Exact, Numeric };

// Homogeneous polynomial with rational coefficients. Numeric mode keeps the
// same (lossless) storage but marks coefficients as float-derived: exact-only
// operations such as divisibility refuse to run on it, and arithmetic taints
// results. The zero polynomial keeps its declared degree.
class HomPoly {
 public:
  using TermMap = std::map<Exps, Rational, GradedLexGreater>;

  HomPoly() : nvars_(0), degree_(0), mode_(Mode::Exact) {}
  HomPoly(int nvars, int degree, Mode mode = Mode::Exact);

  static HomPoly zero(int nvars, int degree, Mode mode = Mode::Exact) {
    return HomPoly(nvars, degree, mode);
  }
  static HomPoly monomial(int nvars, const Exps& e, const Rational& c);
  static HomPoly from_coeff_vector(int nvars, int degree, const std::vector<double>& c,
                                   Mode mode = Mode::Numeric);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  Mode mode() const { return mode_; }
  bool exact() const { return mode_ == Mode::Exact; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  Rational coeff(const Exps& e) const;
  void add_term(const Exps& e, const Rational& c);  // accumulates, erases zeros
  const std::pair<const Exps, Rational>& leading() const;

  HomPoly operator-() const;
  friend HomPoly operator+(const HomPoly& a, const HomPoly& b);
  friend HomPoly operator-(const HomPoly& a, const HomPoly& b);
  friend HomPoly operator*(const HomPoly& a, const HomPoly& b);
  HomPoly scaled(const Rational& c) const;
  bool operator==(const HomPoly& o) const {
    return nvars_ == o.nvars_ && degree_ == o.degree_ && terms_ == o.terms_;
  }
  bool operator!=(const HomPoly& o) const { return !(*this == o); }

  HomPoly derivative(int var) const;
  std::vector<HomPoly> gradient() const;
  std::vector<std::vector<HomPoly>> hessian() const;  // symmetric, degree-2

  Rational eval(const std::vector<Rational>& y) const;
  double eval(const std::vector<double>& y) const;

  double max_abs_coeff() const;
  void taint_numeric() { mode_ = Mode::Numeric; }
  std::vector<double> coeff_vector(int degree) const;  // on monomial_basis(nvars, degree)

  // Human-readable graded-lex form, e.g. "y1^4 y2^2 - 3 y1^2 y2^2 y3^2".
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  void check_term(const Exps& e) const;

  int nvars_;
  int degree_;
  Mode mode_;
  TermMap terms_;
};

// All monomials of the given degree, descending graded-lex (leading first).
std::vector<Exps> monomial_basis(int nvars, int degree);

// Exact single-divisor division: quotient h with p == h*q, nullopt when q
// does not divide p. Throws ModeError unless both operands are exact.
std::optional<HomPoly> poly_divide(const HomPoly& p, const HomPoly& q);

// Square root of an even-degree polynomial by lexicographic peeling of the
// leading term. Exact when the leading coefficient has a rational root,
// otherwise a floating peel whose residual is verified against the input
// (result tainted Numeric). Returns the root with positive leading
// coefficient; nullopt if p is not a square.
std::optional<HomPoly> perfect_square_test(const HomPoly& p);

// GCD over Q[y] via primitive pseudo-remainder sequences; result is integer-
// primitive with positive leading coefficient (1 for coprime inputs).
// Exact-mode inputs only.
HomPoly poly_gcd(const HomPoly& f, const HomPoly& g);

// Dense evaluation cache for hot loops (sphere optimization etc.).
struct FlatPoly {
  int nvars = 0;
  std::vector<Exps> exps;
  std::vector<double> coeffs;

  explicit FlatPoly(const HomPoly& p);
  double eval(const double* y) const;
  void grad(const double* y, double* g) const;
  void hess(const double* y, double* h) const;  // row-major nvars*nvars
};

}  // namespace coneray
