#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cmreflex/rational.hpp"

namespace cmreflex {

// Row-major dense matrix. Columns are the natural unit for lattices here:
// a lattice basis is stored as the columns of a matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_columns(const std::vector<std::vector<T>>& cols, size_t rows) {
    Matrix m(rows, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
      for (size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  std::vector<T> column(size_t j) const {
    std::vector<T> c(rows_);
    for (size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(size_t j, const std::vector<T>& c) {
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }
  std::vector<std::vector<T>> columns() const {
    std::vector<std::vector<T>> out;
    for (size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        const T& x = (*this)(i, k);
        if (x == 0) continue;
        for (size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
      }
    return r;
  }
  std::vector<T> operator*(const std::vector<T>& v) const {
    std::vector<T> r(rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) r[i] += (*this)(i, k) * v[k];
    return r;
  }
  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using QMatrix = Matrix<Rational>;
using ZMatrix = Matrix<Integer>;
using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

QMatrix to_rational(const ZMatrix& m);

Rational det(QMatrix m);
Integer det(const ZMatrix& m);
size_t rank(QMatrix m);
// Throws InvalidArgument on a singular matrix.
QMatrix inverse(const QMatrix& m);
std::optional<QVector> solve(const QMatrix& a, const QVector& b);
// Basis of the right kernel over Q (as columns).
std::vector<QVector> kernel(const QMatrix& m);

// Column Hermite normal form of the lattice spanned by the columns of gens,
// which must span a full-rank sublattice of Z^n. Result is n x n, upper
// triangular, positive diagonal, and 0 <= H(i,j) < H(i,i) for j > i.
// If `modulus` is nonzero the caller guarantees modulus * Z^n lies in the
// lattice; entries are then kept reduced.
ZMatrix hnf(const ZMatrix& gens, const Integer& modulus = Integer(0));
// Reduce v modulo the lattice with HNF basis h (canonical representative).
ZVector hnf_reduce(const ZMatrix& h, ZVector v);
// Coordinates of v in the HNF basis, if v lies in the lattice.
std::optional<ZVector> hnf_solve(const ZMatrix& h, const ZVector& v);

// Right kernel over Z: a basis (as columns) of {x in Z^m : A x = 0}.
ZMatrix integer_kernel(const ZMatrix& a);

// Smith normal form: U * A * V = D with U, V unimodular; diag returns the
// elementary divisors d_1 | d_2 | ... (zeros last for rank-deficient input).
struct SmithForm {
  ZMatrix U, V;
  std::vector<Integer> diag;
};
SmithForm smith_form(const ZMatrix& a);

// Linear algebra over F_p (p small prime): kernel basis of the map x -> A x.
std::vector<std::vector<long>> kernel_mod_p(const std::vector<std::vector<long>>& rows, size_t ncols, long p);
size_t rank_mod_p(std::vector<std::vector<long>> rows, size_t ncols, long p);

std::string to_string(const QMatrix& m);

}  // namespace cmreflex
