#include "coneray/poly_matrix.hpp"

#include "coneray/error.hpp"

namespace coneray {

PolyMatrix::PolyMatrix(int rows, int cols, int nvars, int degree, Mode mode)
    : rows_(rows), cols_(cols), nvars_(nvars), degree_(degree) {
  if (rows < 0 || cols < 0) fail(Errc::InputError, "matrix shape must be nonnegative");
  e_.assign(rows * cols, HomPoly::zero(nvars, degree, mode));
}

void PolyMatrix::set(int i, int j, const HomPoly& p) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) fail(Errc::InputError, "matrix index");
  if (p.nvars() != nvars_) fail(Errc::DimensionMismatch, "entry variable count");
  if (!p.is_zero() && p.degree() != degree_) fail(Errc::DegreeMismatch, "entry degree");
  e_[i * cols_ + j] = p;
}

bool PolyMatrix::is_zero() const {
  for (const auto& p : e_)
    if (!p.is_zero()) return false;
  return true;
}

bool PolyMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (!(at(i, j) == at(j, i))) return false;
  return true;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_, nvars_, degree_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
  return t;
}

PolyMatrix PolyMatrix::select(const std::vector<int>& rows, const std::vector<int>& cols) const {
  PolyMatrix s(static_cast<int>(rows.size()), static_cast<int>(cols.size()), nvars_, degree_);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) s.set(static_cast<int>(i), static_cast<int>(j), at(rows[i], cols[j]));
  return s;
}

HomPoly PolyMatrix::det() const {
  if (rows_ != cols_) fail(Errc::DimensionMismatch, "determinant of non-square matrix");
  if (rows_ > 4) fail(Errc::UnsupportedDimension, "determinant supported up to 4x4");
  if (rows_ == 0) fail(Errc::InputError, "determinant of empty matrix");
  if (rows_ == 1) return at(0, 0);
  HomPoly d = HomPoly::zero(nvars_, degree_ * rows_);
  std::vector<int> cols(cols_ - 1);
  for (int j = 0; j < cols_; ++j) {
    if (at(0, j).is_zero()) continue;
    int w = 0;
    for (int c = 0; c < cols_; ++c)
      if (c != j) cols[w++] = c;
    std::vector<int> rows(rows_ - 1);
    for (int r = 1; r < rows_; ++r) rows[r - 1] = r;
    HomPoly m = select(rows, cols).det();
    HomPoly term = at(0, j) * m;
    d = (j % 2 == 0) ? d + term : d - term;
  }
  return d;
}

HomPoly PolyMatrix::cofactor(int i, int j) const {
  if (rows_ != cols_) fail(Errc::DimensionMismatch, "cofactor of non-square matrix");
  std::vector<int> rows, cols;
  for (int r = 0; r < rows_; ++r)
    if (r != i) rows.push_back(r);
  for (int c = 0; c < cols_; ++c)
    if (c != j) cols.push_back(c);
  HomPoly m = select(rows, cols).det();
  return ((i + j) % 2 == 0) ? m : -m;
}

PolyMatrix PolyMatrix::cofactor_matrix() const {
  PolyMatrix out(rows_, cols_, nvars_, degree_ * (rows_ - 1));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(i, j, cofactor(i, j));
  return out;
}

std::vector<double> PolyMatrix::eval(const std::vector<double>& y) const {
  std::vector<double> v(e_.size());
  for (size_t i = 0; i < e_.size(); ++i) v[i] = e_[i].eval(y);
  return v;
}

std::vector<Rational> PolyMatrix::eval(const std::vector<Rational>& y) const {
  std::vector<Rational> v(e_.size());
  for (size_t i = 0; i < e_.size(); ++i) v[i] = e_[i].eval(y);
  return v;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && nvars_ == o.nvars_ && e_ == o.e_;
}

std::array<HomPoly, 4> mixed_det_expansion(const PolyMatrix& t, const PolyMatrix& t1) {
  if (t.rows() != 3 || t.cols() != 3 || t1.rows() != 3 || t1.cols() != 3)
    fail(Errc::UnsupportedDimension, "mixed determinant expansion is a 3x3 identity");
  if (t.nvars() != t1.nvars()) fail(Errc::DimensionMismatch, "variable counts differ");
  PolyMatrix ct = t.cofactor_matrix(), ct1 = t1.cofactor_matrix();
  HomPoly c1 = HomPoly::zero(t.nvars(), t.entry_degree() * 2 + t1.entry_degree());
  HomPoly c2 = HomPoly::zero(t.nvars(), t.entry_degree() + t1.entry_degree() * 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      c1 = c1 + t1.at(i, j) * ct.at(i, j);
      c2 = c2 + t.at(i, j) * ct1.at(i, j);
    }
  return {t.det(), c1, c2, t1.det()};
}

}  // namespace coneray
