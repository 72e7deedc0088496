#include "coneray/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "coneray/error.hpp"

namespace coneray {

namespace {

// One optional sign, then digits only. BigInt's own parser accepts strings we
// don't want here ("0x1f"), so validate by hand.
BigInt parse_signed_integer(const std::string& s, const std::string& whole) {
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) fail(Errc::InputError, "malformed rational literal '" + whole + "'");
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      fail(Errc::InputError, "malformed rational literal '" + whole + "'");
  BigInt v(s.substr(i));
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& s) {
  if (s.empty()) fail(Errc::InputError, "empty rational literal");
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_signed_integer(s, s));
  }
  BigInt num = parse_signed_integer(s.substr(0, slash), s);
  BigInt den = parse_signed_integer(s.substr(slash + 1), s);
  if (den == 0) fail(Errc::InputError, "zero denominator in '" + s + "'");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  // cpp_rational keeps values canonical (reduced, positive denominator).
  std::string num = numerator(q).str();
  if (denominator(q) == 1) return num;
  return num + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.template convert_to<double>(); }

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return Rational(0);
  BigInt n = numerator(q), d = denominator(q);
  BigInt sn = sqrt(n), sd = sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

Rational rationalize_capped(double x, const BigInt& max_den) {
  if (!std::isfinite(x)) fail(Errc::InputError, "cannot rationalize non-finite value");
  bool neg = x < 0;
  double v = std::fabs(x);
  // Continued fraction convergents p/q of v.
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 1e18) break;
    BigInt a(static_cast<long long>(fl));
    BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  return neg ? Rational(-r) : r;
}

Rational rationalize(double x, double tol, const BigInt& max_den) {
  if (!std::isfinite(x)) fail(Errc::InputError, "cannot rationalize non-finite value");
  double scale = std::max(1.0, std::fabs(x));
  double rx = std::round(x);
  if (std::fabs(x - rx) <= tol * scale) {
    return Rational(BigInt(static_cast<long long>(rx)));
  }
  bool neg = x < 0;
  double v = std::fabs(x);
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  Rational best(0);
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 1e18) break;
    BigInt a(static_cast<long long>(fl));
    BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    best = Rational(p1, q1);
    if (std::fabs(to_double(best) - v) <= tol * scale) break;
    double rem = frac - fl;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  return neg ? Rational(-best) : best;
}

}  // namespace coneray
