#include "plg/matrix.hpp"

namespace plg {

Matrix Matrix::identity(int n, const FieldSpec& f) {
  Matrix m(n, n, f);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
  return m;
}

Matrix Matrix::from_rows(const FieldSpec& f, const std::vector<std::vector<Scalar>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(r, c, f);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      fail(Errc::invalid_input, "ragged row list for matrix");
    for (int j = 0; j < c; ++j) {
      if (rows[i][j].field() != f) fail(Errc::precondition, "row scalar from wrong field");
      m.at(i, j) = rows[i][j];
    }
  }
  return m;
}

std::vector<Scalar> Matrix::row(int r) const {
  std::vector<Scalar> out;
  out.reserve(cols_);
  for (int j = 0; j < cols_; ++j) out.push_back(at(r, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix m(*this);
  for (auto& x : m.a_) x = x * s;
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.field_ != b.field_) fail(Errc::precondition, "matrix product over mixed fields");
  if (a.cols_ != b.rows_) fail(Errc::precondition, "matrix product shape mismatch");
  Matrix c(a.rows_, b.cols_, a.field_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) c.at(i, j) = c.at(i, j) + aik * b.at(k, j);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.field_ != b.field_ || a.rows_ != b.rows_ || a.cols_ != b.cols_)
    fail(Errc::precondition, "matrix sum shape/field mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] = c.a_[i] + b.a_[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.field_ != b.field_ || a.rows_ != b.rows_ || a.cols_ != b.cols_)
    fail(Errc::precondition, "matrix difference shape/field mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] = c.a_[i] - b.a_[i];
  return c;
}

std::vector<Scalar> mat_vec(const Matrix& a, const std::vector<Scalar>& x) {
  if (static_cast<int>(x.size()) != a.cols()) fail(Errc::precondition, "mat_vec shape mismatch");
  std::vector<Scalar> y(a.rows(), Scalar::zero(a.field()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) y[i] = y[i] + a.at(i, j) * x[j];
  return y;
}

RrefResult rref(const Matrix& m) {
  RrefResult out{m, {}};
  Matrix& a = out.reduced;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (!a.at(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
    Scalar inv = a.at(r, c).inverse();
    for (int j = c; j < a.cols(); ++j) a.at(r, j) = a.at(r, j) * inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, c).is_zero()) continue;
      Scalar factor = a.at(i, c);
      for (int j = c; j < a.cols(); ++j) a.at(i, j) = a.at(i, j) - factor * a.at(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

int rank(const Matrix& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

Matrix kernel_basis(const Matrix& m) {
  RrefResult rr = rref(m);
  const FieldSpec& f = m.field();
  std::vector<int> free_cols;
  {
    std::size_t k = 0;
    for (int c = 0; c < m.cols(); ++c) {
      if (k < rr.pivot_cols.size() && rr.pivot_cols[k] == c)
        ++k;
      else
        free_cols.push_back(c);
    }
  }
  Matrix basis(static_cast<int>(free_cols.size()), m.cols(), f);
  for (std::size_t b = 0; b < free_cols.size(); ++b) {
    int fc = free_cols[b];
    basis.at(static_cast<int>(b), fc) = Scalar::one(f);
    for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i)
      basis.at(static_cast<int>(b), rr.pivot_cols[i]) = -rr.reduced.at(static_cast<int>(i), fc);
  }
  return basis;
}

std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b) {
  if (static_cast<int>(b.size()) != m.rows()) fail(Errc::precondition, "solve: rhs length mismatch");
  Matrix aug(m.rows(), m.cols() + 1, m.field());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    if (b[i].field() != m.field()) fail(Errc::precondition, "solve: rhs from wrong field");
    aug.at(i, m.cols()) = b[i];
  }
  RrefResult rr = rref(aug);
  for (int c : rr.pivot_cols)
    if (c == m.cols()) return std::nullopt;  // inconsistent system
  std::vector<Scalar> x(m.cols(), Scalar::zero(m.field()));
  for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i) x[rr.pivot_cols[i]] = rr.reduced.at(static_cast<int>(i), m.cols());
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) fail(Errc::precondition, "inverse of non-square matrix");
  int n = m.rows();
  Matrix aug(n, 2 * n, m.field());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = Scalar::one(m.field());
  }
  RrefResult rr = rref(aug);
  if (static_cast<int>(rr.pivot_cols.size()) < n || rr.pivot_cols[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n, m.field());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = rr.reduced.at(i, n + j);
  return inv;
}

}  // namespace plg
