#include "coneray/biquadratic.hpp"

#include <cmath>
#include <cstdlib>

#include "coneray/error.hpp"

namespace coneray {

namespace {

void check_dims(int dx, int dy) {
  if (dx < 1 || dy < 1) {
    fail(Errc::DimensionMismatch, "biquadratic dimensions must be positive");
  }
}

}  // namespace

BiquadraticForm::BiquadraticForm(int dx, int dy, Mode mode)
    : dx_(dx), dy_(dy), mode_(mode) {
  check_dims(dx, dy);
  gram_.assign(static_cast<size_t>(dx * dy) * (dx * dy), Rational(0));
}

BiquadraticForm BiquadraticForm::from_tensor(const ElastTensor& c) {
  const int d = c.dim();
  BiquadraticForm f(d, d, c.mode());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          f.gref(f.flat(i, j), f.flat(k, l)) = c.at(i, j, k, l);
  return f;
}

BiquadraticForm BiquadraticForm::from_poly_matrix(const PolyMatrix& t) {
  if (t.rows() != t.cols()) {
    fail(Errc::DimensionMismatch, "acoustic matrix must be square");
  }
  if (t.entry_degree() != 2) {
    fail(Errc::DegreeMismatch, "acoustic matrix entries must be quadratic");
  }
  if (!t.is_symmetric()) {
    fail(Errc::PreconditionViolated, "acoustic matrix must be symmetric");
  }
  const int dx = t.rows();
  const int dy = t.nvars();
  BiquadraticForm f(dx, dy, t.at(0, 0).mode());
  for (int i = 0; i < dx; ++i) {
    for (int k = i; k < dx; ++k) {
      const HomPoly& p = t.at(i, k);
      for (const auto& [e, v] : p.terms()) {
        int j = -1, l = -1;
        for (int m = 0; m < dy; ++m) {
          if (e[m] == 2) {
            j = l = m;
          } else if (e[m] == 1) {
            (j < 0 ? j : l) = m;
          }
        }
        // split y_j y_l (j != l) evenly over both orders
        Rational cjl = (j == l) ? v : v / 2;
        f.gref(f.flat(i, j), f.flat(k, l)) += cjl;
        if (j != l) f.gref(f.flat(i, l), f.flat(k, j)) += cjl;
        if (i != k) {
          f.gref(f.flat(k, j), f.flat(i, l)) += cjl;
          if (j != l) f.gref(f.flat(k, l), f.flat(i, j)) += cjl;
        }
      }
    }
  }
  return f;
}

const Rational& BiquadraticForm::coeff(int i, int j, int k, int l) const {
  if (i < 0 || i >= dx_ || k < 0 || k >= dx_ || j < 0 || j >= dy_ || l < 0 ||
      l >= dy_) {
    fail(Errc::DimensionMismatch, "biquadratic coefficient index out of range");
  }
  return gref(flat(i, j), flat(k, l));
}

void BiquadraticForm::add_bilinear_square(const Rational& weight,
                                          const std::vector<Rational>& b) {
  const int n = dx_ * dy_;
  if (static_cast<int>(b.size()) != n) {
    fail(Errc::DimensionMismatch, "bilinear coefficient vector has wrong size");
  }
  for (int a = 0; a < n; ++a) {
    if (b[a] == 0) continue;
    for (int c = 0; c < n; ++c) {
      if (b[c] == 0) continue;
      gref(a, c) += weight * b[a] * b[c];
    }
  }
}

bool BiquadraticForm::is_zero() const {
  for (const auto& v : gram_)
    if (v != 0) return false;
  return true;
}

Rational BiquadraticForm::eval(const std::vector<Rational>& x,
                               const std::vector<Rational>& y) const {
  if (static_cast<int>(x.size()) != dx_ || static_cast<int>(y.size()) != dy_) {
    fail(Errc::DimensionMismatch, "evaluation point has wrong dimensions");
  }
  std::vector<Rational> v(static_cast<size_t>(dx_) * dy_);
  for (int i = 0; i < dx_; ++i)
    for (int j = 0; j < dy_; ++j) v[flat(i, j)] = x[i] * y[j];
  Rational out(0);
  const int n = dx_ * dy_;
  for (int a = 0; a < n; ++a) {
    if (v[a] == 0) continue;
    for (int c = 0; c < n; ++c) {
      if (v[c] == 0) continue;
      out += gref(a, c) * v[a] * v[c];
    }
  }
  return out;
}

double BiquadraticForm::eval(const std::vector<double>& x,
                             const std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != dx_ || static_cast<int>(y.size()) != dy_) {
    fail(Errc::DimensionMismatch, "evaluation point has wrong dimensions");
  }
  std::vector<double> v(static_cast<size_t>(dx_) * dy_);
  for (int i = 0; i < dx_; ++i)
    for (int j = 0; j < dy_; ++j) v[flat(i, j)] = x[i] * y[j];
  double out = 0.0;
  const int n = dx_ * dy_;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) out += to_double(gref(a, c)) * v[a] * v[c];
  return out;
}

PolyMatrix BiquadraticForm::y_matrix() const {
  PolyMatrix t(dx_, dx_, dy_, 2, mode_);
  for (int i = 0; i < dx_; ++i) {
    for (int k = i; k < dx_; ++k) {
      HomPoly p = HomPoly::zero(dy_, 2, mode_);
      for (int j = 0; j < dy_; ++j) {
        for (int l = 0; l < dy_; ++l) {
          const Rational& g = gref(flat(i, j), flat(k, l));
          if (g == 0) continue;
          Exps e(dy_, 0);
          e[j] += 1;
          e[l] += 1;
          p.add_term(e, g);
        }
      }
      t.set(i, k, p);
      if (i != k) t.set(k, i, p);
    }
  }
  return t;
}

PolyMatrix BiquadraticForm::x_matrix() const {
  PolyMatrix t(dy_, dy_, dx_, 2, mode_);
  for (int j = 0; j < dy_; ++j) {
    for (int l = j; l < dy_; ++l) {
      HomPoly p = HomPoly::zero(dx_, 2, mode_);
      for (int i = 0; i < dx_; ++i) {
        for (int k = 0; k < dx_; ++k) {
          const Rational& g = gref(flat(i, j), flat(k, l));
          if (g == 0) continue;
          Exps e(dx_, 0);
          e[i] += 1;
          e[k] += 1;
          p.add_term(e, g);
        }
      }
      t.set(j, l, p);
      if (j != l) t.set(l, j, p);
    }
  }
  return t;
}

HomPoly BiquadraticForm::to_poly() const {
  const int nv = dx_ + dy_;
  HomPoly p = HomPoly::zero(nv, 4, mode_);
  const int n = dx_ * dy_;
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      const Rational& g = gref(a, c);
      if (g == 0) continue;
      Exps e(nv, 0);
      e[a / dy_] += 1;
      e[dx_ + a % dy_] += 1;
      e[c / dy_] += 1;
      e[dx_ + c % dy_] += 1;
      p.add_term(e, g);
    }
  }
  return p;
}

double BiquadraticForm::max_abs_entry() const {
  double m = 0.0;
  for (const auto& v : gram_) m = std::max(m, std::abs(to_double(v)));
  return m;
}

bool BiquadraticForm::operator==(const BiquadraticForm& other) const {
  return dx_ == other.dx_ && dy_ == other.dy_ && gram_ == other.gram_;
}

}  // namespace coneray
