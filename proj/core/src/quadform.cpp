#include "coneray/quadform.hpp"

#include <cmath>

#include "coneray/error.hpp"

namespace coneray {

bool LinearForm::is_zero() const {
  for (const auto& c : coeffs)
    if (c != 0) return false;
  return true;
}

HomPoly LinearForm::to_poly() const {
  HomPoly p(nvars, 1);
  for (int i = 0; i < nvars; ++i) {
    if (coeffs[i] == 0) continue;
    Exps e(nvars, 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

std::string LinearForm::str(const std::vector<std::string>& names) const {
  return to_poly().str(names);
}

std::string quad_kind_name(QuadKind k) {
  switch (k) {
    case QuadKind::Zero: return "Zero";
    case QuadKind::SquareOfLinear: return "SquareOfLinear";
    case QuadKind::ProductOfTwoLinears: return "ProductOfTwoLinears";
    case QuadKind::IrreducibleDefinite: return "IrreducibleDefinite";
    case QuadKind::IrreducibleIndefinite: return "IrreducibleIndefinite";
  }
  return "?";
}

namespace {

// Divide out content and flip so the first nonzero coefficient is positive.
// Returns the content removed (q = content * primitive form).
Rational normalize_linear(LinearForm& l) {
  BigInt g(0), m(1);
  for (const auto& c : l.coeffs) {
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator(c)));
    m = boost::multiprecision::lcm(m, denominator(c));
  }
  if (g == 0) return Rational(1);
  Rational content(g, m);
  for (const auto& c : l.coeffs)
    if (c != 0) {
      if (c < 0) content = -content;
      break;
    }
  for (auto& c : l.coeffs) c /= content;
  return content;
}

// Rational congruence diagonalization by completing squares on the Gram
// matrix. Pivots on nonzero diagonal entries; a fully hyperbolic block (zero
// diagonal) is split as c*A*B = (c/4)(A+B)^2 - (c/4)(A-B)^2.
QuadDiag diagonalize(std::vector<Rational> G, int n) {
  QuadDiag out;
  auto push = [&](const Rational& d, std::vector<Rational> v) {
    if (d == 0) return;
    out.d.push_back(d);
    out.forms.push_back(LinearForm{n, std::move(v)});
    ++out.rank;
    (d > 0 ? out.pos : out.neg) += 1;
  };
  while (true) {
    int k = -1;
    for (int i = 0; i < n && k < 0; ++i)
      if (G[i * n + i] != 0) k = i;
    if (k >= 0) {
      Rational d = G[k * n + k];
      std::vector<Rational> v(n);
      for (int j = 0; j < n; ++j) v[j] = G[k * n + j] / d;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) G[a * n + b] -= d * v[a] * v[b];
      push(d, std::move(v));
      continue;
    }
    int pi = -1, pj = -1;
    for (int i = 0; i < n && pi < 0; ++i)
      for (int j = i + 1; j < n; ++j)
        if (G[i * n + j] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;  // G is zero
    Rational c = 2 * G[pi * n + pj];
    // A = y_i + L_j / c, B = y_j + L_i / c with L_i the cross terms of y_i.
    std::vector<Rational> a(n, Rational(0)), b(n, Rational(0));
    a[pi] = 1;
    b[pj] = 1;
    for (int m = 0; m < n; ++m) {
      if (m == pi || m == pj) continue;
      a[m] = 2 * G[pj * n + m] / c;
      b[m] = 2 * G[pi * n + m] / c;
    }
    // Remove c*A*B from G, then emit the two squares.
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) G[u * n + v] -= (c / 2) * (a[u] * b[v] + a[v] * b[u]);
    std::vector<Rational> s(n), t(n);
    for (int m = 0; m < n; ++m) {
      s[m] = a[m] + b[m];
      t[m] = a[m] - b[m];
    }
    push(c / 4, std::move(s));
    push(-c / 4, std::move(t));
  }
  return out;
}

}  // namespace

QuadForm::QuadForm(const HomPoly& p) : poly_(p) {
  if (p.degree() != 2) fail(Errc::DegreeMismatch, "quadratic form must have degree 2");
  const int n = p.nvars();
  gram_.assign(n * n, Rational(0));
  for (const auto& [e, c] : p.terms()) {
    int i = -1, j = -1;
    for (int v = 0; v < n; ++v) {
      if (e[v] == 2) i = j = v;
      if (e[v] == 1) (i < 0 ? i : j) = v;
    }
    if (i == j) {
      gram_[i * n + i] = c;
    } else {
      gram_[i * n + j] = c / 2;
      gram_[j * n + i] = c / 2;
    }
  }
  diag_ = diagonalize(gram_, n);
}

QuadClassification quad_classify(const QuadForm& q) {
  const QuadDiag& dg = q.diagonalization();
  QuadClassification out;
  out.rank = dg.rank;
  out.pos = dg.pos;
  out.neg = dg.neg;
  if (dg.rank == 0) {
    out.kind = QuadKind::Zero;
    return out;
  }
  if (dg.rank == 1) {
    out.kind = QuadKind::SquareOfLinear;
    LinearForm l = dg.forms[0];
    Rational content = normalize_linear(l);
    out.scale = dg.d[0] * content * content;
    out.l1 = l;
    return out;
  }
  if (dg.rank == 2 && dg.pos == 1) {
    out.kind = QuadKind::ProductOfTwoLinears;
    // q = d1 l1^2 - d2 l2^2 with d1, d2 > 0.
    int ip = dg.d[0] > 0 ? 0 : 1, in = 1 - ip;
    Rational d1 = dg.d[ip], d2 = -dg.d[in];
    const LinearForm &l1 = dg.forms[ip], &l2 = dg.forms[in];
    if (auto s = rational_sqrt(d1 * d2)) {
      LinearForm fa{q.n(), {}}, fb{q.n(), {}};
      fa.coeffs.resize(q.n());
      fb.coeffs.resize(q.n());
      for (int i = 0; i < q.n(); ++i) {
        fa.coeffs[i] = d1 * l1.coeffs[i] - *s * l2.coeffs[i];
        fb.coeffs[i] = l1.coeffs[i] + (*s / d1) * l2.coeffs[i];
      }
      Rational ca = normalize_linear(fa), cb = normalize_linear(fb);
      // Keep the product exact: fold both contents into the first factor.
      for (auto& c : fa.coeffs) c *= ca * cb;
      out.l1 = fa;
      out.l2 = fb;
    } else {
      out.factors_exact = false;
      double r1 = std::sqrt(to_double(d1)), r2 = std::sqrt(to_double(d2));
      std::array<std::vector<double>, 2> nf;
      nf[0].resize(q.n());
      nf[1].resize(q.n());
      for (int i = 0; i < q.n(); ++i) {
        double u = r1 * to_double(l1.coeffs[i]), v = r2 * to_double(l2.coeffs[i]);
        nf[0][i] = u - v;
        nf[1][i] = u + v;
      }
      out.numeric_factors = nf;
    }
    return out;
  }
  out.kind = (dg.pos == dg.rank || dg.neg == dg.rank) ? QuadKind::IrreducibleDefinite
                                                      : QuadKind::IrreducibleIndefinite;
  return out;
}

}  // namespace coneray
