#include "coneray/elast_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coneray/error.hpp"

namespace coneray {

namespace {

void check_dim(int d) {
  if (d < 2 || d > 4) fail(Errc::UnsupportedDimension, "tensor dimension must be 2, 3 or 4");
}

}  // namespace

ElastTensor::ElastTensor(int d, Mode mode) : d_(d), mode_(mode) {
  check_dim(d);
  c_.assign(static_cast<size_t>(d) * d * d * d, Rational(0));
}

size_t ElastTensor::idx(int i, int j, int k, int l) const {
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= d_ || j >= d_ || k >= d_ || l >= d_)
    fail(Errc::InputError, "tensor index out of range");
  return ((static_cast<size_t>(i) * d_ + j) * d_ + k) * d_ + l;
}

std::array<std::array<int, 4>, 4> ElastTensor::orbit(int i, int j, int k, int l) {
  return {{{i, j, k, l}, {k, j, i, l}, {i, l, k, j}, {k, l, i, j}}};
}

const Rational& ElastTensor::at(int i, int j, int k, int l) const {
  return c_[idx(i, j, k, l)];
}

void ElastTensor::set(int i, int j, int k, int l, const Rational& v) {
  for (const auto& q : orbit(i, j, k, l)) c_[idx(q[0], q[1], q[2], q[3])] = v;
}

bool ElastTensor::is_zero() const {
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool ElastTensor::operator==(const ElastTensor& o) const { return d_ == o.d_ && c_ == o.c_; }

ElastTensor ElastTensor::from_entries(int d, const std::vector<TensorEntry>& entries,
                                      bool strict) {
  check_dim(d);
  ElastTensor t(d);
  // Group claims by the canonical (smallest) member of their orbit.
  std::map<std::array<int, 4>, std::vector<Rational>> claims;
  for (const auto& e : entries) {
    t.idx(e.i, e.j, e.k, e.l);  // range check
    auto orb = orbit(e.i, e.j, e.k, e.l);
    claims[*std::min_element(orb.begin(), orb.end())].push_back(e.value);
  }
  for (const auto& [key, vals] : claims) {
    Rational sum(0);
    for (const auto& v : vals) {
      if (strict && v != vals.front())
        fail(Errc::ConflictingAssignment,
             "entries in the symmetry orbit of C[" + std::to_string(key[0] + 1) + "," +
                 std::to_string(key[1] + 1) + "," + std::to_string(key[2] + 1) + "," +
                 std::to_string(key[3] + 1) + "] disagree");
      sum += v;
    }
    t.set(key[0], key[1], key[2], key[3], sum / static_cast<int>(vals.size()));
  }
  return t;
}

ElastTensor ElastTensor::from_form(const HomPoly& f) {
  int d;
  switch (f.nvars()) {
    case 4: d = 2; break;
    case 9: d = 3; break;
    case 16: d = 4; break;
    default: fail(Errc::DimensionMismatch, "matrix-variable form needs d^2 variables");
  }
  if (f.degree() != 2) fail(Errc::DegreeMismatch, "matrix-variable form must be quadratic");
  ElastTensor t(d, f.mode());
  // Gram matrix of f over the d^2 flattened variables.
  std::vector<Rational> m(static_cast<size_t>(d) * d * d * d, Rational(0));
  auto mref = [&](int a, int b) -> Rational& { return m[static_cast<size_t>(a) * d * d + b]; };
  for (const auto& [e, c] : f.terms()) {
    int a = -1, b = -1;
    for (int v = 0; v < d * d; ++v) {
      if (e[v] == 2) a = b = v;
      if (e[v] == 1) (a < 0 ? a : b) = v;
    }
    if (a == b) {
      mref(a, a) = c;
    } else {
      mref(a, b) = c / 2;
      mref(b, a) = c / 2;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Rational avg(0);
          for (const auto& q : orbit(i, j, k, l))
            avg += mref(q[0] * d + q[1], q[2] * d + q[3]);
          t.c_[t.idx(i, j, k, l)] = avg / 4;
        }
  return t;
}

HomPoly ElastTensor::to_form() const {
  const int n = d_ * d_;
  HomPoly f(n, 2, mode_);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const Rational& v = c_[static_cast<size_t>(a) * n + b];
      if (v == 0) continue;
      Exps e(n, 0);
      e[a] += 1;
      e[b] += 1;
      f.add_term(e, a == b ? v : 2 * v);
    }
  return f;
}

Rational ElastTensor::eval_rank_one(const std::vector<Rational>& x,
                                    const std::vector<Rational>& y) const {
  if (static_cast<int>(x.size()) != d_ || static_cast<int>(y.size()) != d_)
    fail(Errc::DimensionMismatch, "rank-one evaluation point");
  Rational s(0);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k)
        for (int l = 0; l < d_; ++l) {
          const Rational& v = c_[idx(i, j, k, l)];
          if (v != 0) s += v * x[i] * y[j] * x[k] * y[l];
        }
  return s;
}

double ElastTensor::eval_rank_one(const std::vector<double>& x,
                                  const std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != d_ || static_cast<int>(y.size()) != d_)
    fail(Errc::DimensionMismatch, "rank-one evaluation point");
  double s = 0;
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k)
        for (int l = 0; l < d_; ++l) {
          const Rational& v = c_[idx(i, j, k, l)];
          if (v != 0) s += to_double(v) * x[i] * y[j] * x[k] * y[l];
        }
  return s;
}

PolyMatrix ElastTensor::acoustic_matrix() const {
  PolyMatrix t(d_, d_, d_, 2, mode_);
  for (int i = 0; i < d_; ++i)
    for (int k = 0; k < d_; ++k) {
      HomPoly p(d_, 2, mode_);
      for (int j = 0; j < d_; ++j)
        for (int l = 0; l < d_; ++l) {
          const Rational& v = c_[idx(i, j, k, l)];
          if (v == 0) continue;
          Exps e(d_, 0);
          e[j] += 1;
          e[l] += 1;
          p.add_term(e, v);
        }
      t.set(i, k, p);
    }
  return t;
}

PolyMatrix ElastTensor::x_matrix() const {
  PolyMatrix t(d_, d_, d_, 2, mode_);
  for (int j = 0; j < d_; ++j)
    for (int l = 0; l < d_; ++l) {
      HomPoly p(d_, 2, mode_);
      for (int i = 0; i < d_; ++i)
        for (int k = 0; k < d_; ++k) {
          const Rational& v = c_[idx(i, j, k, l)];
          if (v == 0) continue;
          Exps e(d_, 0);
          e[i] += 1;
          e[k] += 1;
          p.add_term(e, v);
        }
      t.set(j, l, p);
    }
  return t;
}

double ElastTensor::max_abs_entry() const {
  double m = 0;
  for (const auto& v : c_) m = std::max(m, std::abs(to_double(v)));
  return m;
}

}  // namespace coneray
