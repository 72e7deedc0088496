#include "coneray/hompoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coneray/error.hpp"

namespace coneray {

HomPoly::HomPoly(int nvars, int degree, Mode mode)
    : nvars_(nvars), degree_(degree), mode_(mode) {
  if (nvars < 0 || degree < 0) fail(Errc::InputError, "polynomial shape must be nonnegative");
}

void HomPoly::check_term(const Exps& e) const {
  if (static_cast<int>(e.size()) != nvars_)
    fail(Errc::DimensionMismatch, "exponent vector has wrong length");
  for (int p : e)
    if (p < 0) fail(Errc::InputError, "negative exponent");
  if (total_degree(e) != degree_)
    fail(Errc::NonHomogeneousInput, "term degree " + std::to_string(total_degree(e)) +
                                        " in polynomial of degree " + std::to_string(degree_));
}

HomPoly HomPoly::monomial(int nvars, const Exps& e, const Rational& c) {
  HomPoly p(nvars, total_degree(e));
  p.add_term(e, c);
  return p;
}

HomPoly HomPoly::from_coeff_vector(int nvars, int degree, const std::vector<double>& c,
                                   Mode mode) {
  auto basis = monomial_basis(nvars, degree);
  if (c.size() != basis.size())
    fail(Errc::DimensionMismatch, "coefficient vector does not match monomial basis");
  HomPoly p(nvars, degree, mode);
  for (size_t i = 0; i < basis.size(); ++i)
    if (c[i] != 0.0) p.add_term(basis[i], Rational(c[i]));
  return p;
}

Rational HomPoly::coeff(const Exps& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void HomPoly::add_term(const Exps& e, const Rational& c) {
  check_term(e);
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

const std::pair<const Exps, Rational>& HomPoly::leading() const {
  if (terms_.empty()) fail(Errc::PreconditionViolated, "zero polynomial has no leading term");
  return *terms_.begin();
}

HomPoly HomPoly::operator-() const {
  HomPoly r(nvars_, degree_, mode_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

namespace {

Mode join(Mode a, Mode b) {
  return (a == Mode::Numeric || b == Mode::Numeric) ? Mode::Numeric : Mode::Exact;
}

// Zero polynomials are degree-compatible with anything; otherwise shapes must agree.
void check_add_shapes(const HomPoly& a, const HomPoly& b) {
  if (a.nvars() != b.nvars()) fail(Errc::DimensionMismatch, "variable counts differ");
  if (!a.is_zero() && !b.is_zero() && a.degree() != b.degree())
    fail(Errc::DegreeMismatch, "adding degree " + std::to_string(a.degree()) + " to degree " +
                                   std::to_string(b.degree()));
}

}  // namespace

HomPoly operator+(const HomPoly& a, const HomPoly& b) {
  check_add_shapes(a, b);
  int deg = a.is_zero() ? b.degree() : a.degree();
  HomPoly r(a.nvars(), deg, join(a.mode(), b.mode()));
  for (const auto& [e, c] : a.terms()) r.add_term(e, c);
  for (const auto& [e, c] : b.terms()) r.add_term(e, c);
  return r;
}

HomPoly operator-(const HomPoly& a, const HomPoly& b) { return a + (-b); }

HomPoly operator*(const HomPoly& a, const HomPoly& b) {
  if (a.nvars() != b.nvars()) fail(Errc::DimensionMismatch, "variable counts differ");
  HomPoly r(a.nvars(), a.degree() + b.degree(), join(a.mode(), b.mode()));
  Exps e(a.nvars());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      for (int i = 0; i < a.nvars(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

HomPoly HomPoly::scaled(const Rational& c) const {
  HomPoly r(nvars_, degree_, mode_);
  if (c == 0) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
  return r;
}

HomPoly HomPoly::derivative(int var) const {
  if (var < 0 || var >= nvars_) fail(Errc::InputError, "derivative variable out of range");
  if (degree_ == 0) fail(Errc::DegreeMismatch, "derivative of a constant is not homogeneous");
  HomPoly r(nvars_, degree_ - 1, mode_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exps d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

std::vector<HomPoly> HomPoly::gradient() const {
  std::vector<HomPoly> g;
  g.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) g.push_back(derivative(i));
  return g;
}

std::vector<std::vector<HomPoly>> HomPoly::hessian() const {
  if (degree_ < 2) fail(Errc::DegreeMismatch, "hessian needs degree >= 2");
  std::vector<std::vector<HomPoly>> h(
      nvars_, std::vector<HomPoly>(nvars_, HomPoly::zero(nvars_, degree_ - 2, mode_)));
  for (int i = 0; i < nvars_; ++i) {
    HomPoly di = derivative(i);
    for (int j = i; j < nvars_; ++j) {
      h[i][j] = di.derivative(j);
      if (j != i) h[j][i] = h[i][j];
    }
  }
  return h;
}

Rational HomPoly::eval(const std::vector<Rational>& y) const {
  if (static_cast<int>(y.size()) != nvars_) fail(Errc::DimensionMismatch, "evaluation point");
  Rational s(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= y[i];
    s += t;
  }
  return s;
}

double HomPoly::eval(const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != nvars_) fail(Errc::DimensionMismatch, "evaluation point");
  double s = 0;
  for (const auto& [e, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= y[i];
    s += t;
  }
  return s;
}

double HomPoly::max_abs_coeff() const {
  double m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(to_double(c)));
  return m;
}

std::vector<double> HomPoly::coeff_vector(int degree) const {
  if (!is_zero() && degree != degree_) fail(Errc::DegreeMismatch, "coefficient vector degree");
  auto basis = monomial_basis(nvars_, degree);
  std::vector<double> c(basis.size(), 0.0);
  for (size_t i = 0; i < basis.size(); ++i) {
    auto it = terms_.find(basis[i]);
    if (it != terms_.end()) c[i] = to_double(it->second);
  }
  return c;
}

std::string HomPoly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto var = [&](int i) {
    if (i < static_cast<int>(names.size())) return names[i];
    return "y" + std::to_string(i + 1);
  };
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool has_vars = total_degree(e) > 0;
    if (a != 1 || !has_vars) {
      out << format_rational(a);
      if (has_vars) out << " ";
    }
    bool again = false;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (again) out << " ";
      again = true;
      out << var(i);
      if (e[i] > 1) out << "^" << e[i];
    }
  }
  return out.str();
}

std::vector<Exps> monomial_basis(int nvars, int degree) {
  std::vector<Exps> out;
  if (nvars == 0) {
    if (degree == 0) out.push_back({});
    return out;
  }
  Exps cur(nvars, 0);
  // Recursive enumeration emits descending graded-lex order because the first
  // variable's exponent decreases outermost.
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == nvars - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, degree);
  return out;
}

std::optional<HomPoly> poly_divide(const HomPoly& p, const HomPoly& q) {
  if (!p.exact() || !q.exact())
    fail(Errc::ModeError, "exact division requires exact-mode operands");
  if (p.nvars() != q.nvars()) fail(Errc::DimensionMismatch, "variable counts differ");
  if (q.is_zero()) fail(Errc::InputError, "division by zero polynomial");
  if (p.is_zero()) return HomPoly::zero(p.nvars(), std::max(0, p.degree() - q.degree()));
  if (p.degree() < q.degree()) return std::nullopt;

  const auto& [lq, cq] = q.leading();
  HomPoly h(p.nvars(), p.degree() - q.degree());
  HomPoly r = p;
  Exps m(p.nvars());
  while (!r.is_zero()) {
    const auto& [lr, cr] = r.leading();
    for (int i = 0; i < p.nvars(); ++i) {
      m[i] = lr[i] - lq[i];
      if (m[i] < 0) return std::nullopt;
    }
    Rational t = cr / cq;
    h.add_term(m, t);
    r = r - HomPoly::monomial(p.nvars(), m, t) * q;
  }
  return h;
}

namespace {

// One peeling step: given partial root q0 and remainder r = p - q0^2, the next
// root term is LT(r) / (2 LT(q0)); fails when the monomial quotient leaves the
// half-degree basis.
std::optional<HomPoly> square_root_exact(const HomPoly& p) {
  const int n = p.nvars(), half = p.degree() / 2;
  const auto& [lp, cp] = p.leading();
  for (int i = 0; i < n; ++i)
    if (lp[i] % 2 != 0) return std::nullopt;
  auto c0 = rational_sqrt(cp);
  if (!c0) return std::nullopt;

  Exps l0(n);
  for (int i = 0; i < n; ++i) l0[i] = lp[i] / 2;
  HomPoly q = HomPoly::monomial(n, l0, *c0);
  HomPoly r = p - q * q;
  Exps m(n);
  while (!r.is_zero()) {
    const auto& [lr, cr] = r.leading();
    for (int i = 0; i < n; ++i) {
      m[i] = lr[i] - l0[i];
      if (m[i] < 0) return std::nullopt;
    }
    if (total_degree(m) != half) return std::nullopt;
    if (!GradedLexGreater{}(l0, m)) return std::nullopt;  // no progress: not a square
    Rational t = cr / (2 * *c0);
    HomPoly term = HomPoly::monomial(n, m, t);
    r = r - q.scaled(Rational(2)) * term - term * term;
    q = q + term;
  }
  return q;
}

std::optional<HomPoly> square_root_numeric(const HomPoly& p) {
  const int n = p.nvars(), half = p.degree() / 2;
  const double scale = p.max_abs_coeff();
  auto cv = p.coeff_vector(p.degree());
  auto basis = monomial_basis(n, p.degree());
  // Dense float peel over the full-degree basis, leading-first.
  std::map<Exps, double, GradedLexGreater> r;
  for (size_t i = 0; i < basis.size(); ++i)
    if (cv[i] != 0.0) r[basis[i]] = cv[i];
  if (r.empty()) return HomPoly::zero(n, half, Mode::Numeric);

  Exps l0 = r.begin()->first;
  for (int i = 0; i < n; ++i) {
    if (l0[i] % 2 != 0) return std::nullopt;
    l0[i] /= 2;
  }
  if (r.begin()->second < 0) return std::nullopt;
  std::map<Exps, double, GradedLexGreater> q;
  q[l0] = std::sqrt(r.begin()->second);

  const double drop = 1e-12 * std::max(1.0, scale);
  while (true) {
    // Recompute remainder p - q^2 fresh each round for numerical hygiene.
    std::map<Exps, double, GradedLexGreater> rem;
    for (size_t i = 0; i < basis.size(); ++i)
      if (cv[i] != 0.0) rem[basis[i]] = cv[i];
    for (const auto& [ea, ca] : q)
      for (const auto& [eb, cb] : q) {
        Exps e(n);
        for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
        rem[e] -= ca * cb;
      }
    for (auto it = rem.begin(); it != rem.end();)
      it = std::abs(it->second) <= drop ? rem.erase(it) : std::next(it);
    if (rem.empty()) break;

    const auto& [lr, cr] = *rem.begin();
    Exps m(n);
    for (int i = 0; i < n; ++i) {
      m[i] = lr[i] - l0[i];
      if (m[i] < 0) return std::nullopt;
    }
    if (total_degree(m) != half) return std::nullopt;
    if (!GradedLexGreater{}(l0, m)) return std::nullopt;
    if (q.count(m)) return std::nullopt;  // would loop: residual not closing
    q[m] = cr / (2.0 * q[l0]);
  }

  HomPoly root(n, half, Mode::Numeric);
  for (const auto& [e, c] : q)
    if (c != 0.0) root.add_term(e, Rational(c));
  // Residual verification against the input.
  HomPoly diff = p - root * root;
  if (diff.max_abs_coeff() > 1e-10 * std::max(1.0, scale)) return std::nullopt;
  return root;
}

}  // namespace

std::optional<HomPoly> perfect_square_test(const HomPoly& p) {
  if (p.degree() % 2 != 0) return std::nullopt;
  if (p.is_zero()) return HomPoly::zero(p.nvars(), p.degree() / 2, p.mode());
  if (p.leading().second < 0) return std::nullopt;
  if (p.exact()) {
    if (auto q = square_root_exact(p)) return q;
    // Rational peel can fail only through an irrational coefficient root;
    // retry in floating point before giving up.
  }
  return square_root_numeric(p);
}

namespace {

int deg_in_var(const HomPoly& p, int v) {
  int d = 0;
  for (const auto& [e, c] : p.terms()) d = std::max(d, e[v]);
  return d;
}

// Coefficient of v^k as a polynomial in the remaining variables (still stored
// on all nvars, with exponent 0 in v).
HomPoly coeff_of_power(const HomPoly& p, int v, int k) {
  HomPoly r(p.nvars(), p.degree() - k);
  for (const auto& [e, c] : p.terms()) {
    if (e[v] != k) continue;
    Exps d = e;
    d[v] = 0;
    r.add_term(d, c);
  }
  return r;
}

HomPoly shift_in_var(const HomPoly& p, int v, int k) {
  HomPoly r(p.nvars(), p.degree() + k);
  for (const auto& [e, c] : p.terms()) {
    Exps d = e;
    d[v] += k;
    r.add_term(d, c);
  }
  return r;
}

int first_var(const HomPoly& p) {
  for (int v = 0; v < p.nvars(); ++v)
    if (deg_in_var(p, v) > 0) return v;
  return -1;
}

// Divide out the rational content so coefficients become coprime integers,
// and make the graded-lex leading coefficient positive.
HomPoly make_primitive(const HomPoly& p) {
  if (p.is_zero()) return p;
  BigInt g(0), l(1);
  for (const auto& [e, c] : p.terms()) {
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator(c)));
    l = boost::multiprecision::lcm(l, denominator(c));
  }
  Rational content(g, l);
  if (p.leading().second < 0) content = -content;
  return p.scaled(1 / content);
}

HomPoly gcd_rec(const HomPoly& f, const HomPoly& g);

// Content of p with respect to variable v: gcd of the coefficient polynomials.
HomPoly content_in_var(const HomPoly& p, int v) {
  HomPoly c = HomPoly::zero(p.nvars(), 0);
  for (int k = deg_in_var(p, v); k >= 0; --k) {
    HomPoly ck = coeff_of_power(p, v, k);
    if (ck.is_zero()) continue;
    c = c.is_zero() ? make_primitive(ck) : gcd_rec(c, ck);
  }
  return c;
}

HomPoly exact_quotient(const HomPoly& p, const HomPoly& q) {
  auto h = poly_divide(p, q);
  if (!h) fail(Errc::Internal, "gcd bookkeeping: expected exact division");
  return *h;
}

// Pseudo-remainder of f by g in variable v (both nonzero, deg_v f >= deg_v g).
HomPoly pseudo_rem(HomPoly f, const HomPoly& g, int v) {
  const int dg = deg_in_var(g, v);
  const HomPoly lg = coeff_of_power(g, v, dg);
  while (!f.is_zero()) {
    int df = deg_in_var(f, v);
    if (df < dg) break;
    HomPoly lf = coeff_of_power(f, v, df);
    f = f * lg - shift_in_var(lf, v, df - dg) * g;
  }
  return f;
}

HomPoly gcd_rec(const HomPoly& f, const HomPoly& g) {
  if (f.is_zero()) return make_primitive(g);
  if (g.is_zero()) return make_primitive(f);
  int v = std::min(first_var(f) < 0 ? f.nvars() : first_var(f),
                   first_var(g) < 0 ? g.nvars() : first_var(g));
  if (v >= f.nvars()) return HomPoly::monomial(f.nvars(), Exps(f.nvars(), 0), 1);

  HomPoly cf = content_in_var(f, v), cg = content_in_var(g, v);
  HomPoly cont = gcd_rec(cf, cg);
  HomPoly a = exact_quotient(f, cf), b = exact_quotient(g, cg);
  if (deg_in_var(a, v) < deg_in_var(b, v)) std::swap(a, b);
  while (!b.is_zero()) {
    HomPoly r = pseudo_rem(a, b, v);
    a = b;
    if (r.is_zero()) {
      b = r;
    } else {
      HomPoly cr = content_in_var(r, v);
      b = exact_quotient(r, cr);
    }
  }
  return make_primitive(cont * a);
}

}  // namespace

HomPoly poly_gcd(const HomPoly& f, const HomPoly& g) {
  if (!f.exact() || !g.exact()) fail(Errc::ModeError, "gcd requires exact-mode operands");
  if (f.nvars() != g.nvars()) fail(Errc::DimensionMismatch, "variable counts differ");
  return gcd_rec(f, g);
}

FlatPoly::FlatPoly(const HomPoly& p) : nvars(p.nvars()) {
  exps.reserve(p.terms().size());
  coeffs.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    exps.push_back(e);
    coeffs.push_back(to_double(c));
  }
}

double FlatPoly::eval(const double* y) const {
  double s = 0;
  for (size_t t = 0; t < exps.size(); ++t) {
    double m = coeffs[t];
    const Exps& e = exps[t];
    for (int i = 0; i < nvars; ++i)
      for (int k = 0; k < e[i]; ++k) m *= y[i];
    s += m;
  }
  return s;
}

void FlatPoly::grad(const double* y, double* g) const {
  std::fill(g, g + nvars, 0.0);
  for (size_t t = 0; t < exps.size(); ++t) {
    const Exps& e = exps[t];
    for (int v = 0; v < nvars; ++v) {
      if (e[v] == 0) continue;
      double m = coeffs[t] * e[v];
      for (int i = 0; i < nvars; ++i) {
        int pw = e[i] - (i == v ? 1 : 0);
        for (int k = 0; k < pw; ++k) m *= y[i];
      }
      g[v] += m;
    }
  }
}

void FlatPoly::hess(const double* y, double* h) const {
  std::fill(h, h + nvars * nvars, 0.0);
  for (size_t t = 0; t < exps.size(); ++t) {
    const Exps& e = exps[t];
    for (int u = 0; u < nvars; ++u) {
      if (e[u] == 0) continue;
      for (int v = u; v < nvars; ++v) {
        int fac = (u == v) ? e[u] * (e[u] - 1) : e[u] * e[v];
        if (fac == 0) continue;
        double m = coeffs[t] * fac;
        for (int i = 0; i < nvars; ++i) {
          int pw = e[i] - (i == u ? 1 : 0) - (i == v ? 1 : 0);
          for (int k = 0; k < pw; ++k) m *= y[i];
        }
        h[u * nvars + v] += m;
        if (u != v) h[v * nvars + u] += m;
      }
    }
  }
}

}  // namespace coneray
