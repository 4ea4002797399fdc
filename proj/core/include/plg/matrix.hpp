#ifndef PLG_MATRIX_HPP
#define PLG_MATRIX_HPP

#include <optional>
#include <vector>

#include "plg/field.hpp"

namespace plg {

// Dense matrix over a single FieldSpec.  All arithmetic is exact.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const FieldSpec& f)
      : rows_(rows), cols_(cols), field_(f), a_(static_cast<std::size_t>(rows) * cols, Scalar::zero(f)) {}

  static Matrix identity(int n, const FieldSpec& f);
  static Matrix from_rows(const FieldSpec& f, const std::vector<std::vector<Scalar>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldSpec& field() const { return field_; }

  Scalar& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Scalar& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::vector<Scalar> row(int r) const;
  Matrix transpose() const;
  Matrix scaled(const Scalar& s) const;
  bool is_zero() const;

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);

 private:
  int rows_ = 0, cols_ = 0;
  FieldSpec field_ = FieldSpec::rationals();
  std::vector<Scalar> a_;
};

std::vector<Scalar> mat_vec(const Matrix& a, const std::vector<Scalar>& x);

struct RrefResult {
  Matrix reduced;
  std::vector<int> pivot_cols;  // ascending
};

// Reduced row echelon form (Gauss-Jordan with exact arithmetic).
RrefResult rref(const Matrix& m);

int rank(const Matrix& m);

// Rows form a basis of { x : m x = 0 }.  Empty kernel gives a 0 x cols matrix.
// Always satisfies: kernel rows are independent; rank + kernel rows == cols.
Matrix kernel_basis(const Matrix& m);

// One solution of m x = b, if any.
std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b);

std::optional<Matrix> inverse(const Matrix& m);

}  // namespace plg

#endif
