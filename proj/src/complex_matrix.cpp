#include "povmsim/complex_matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "povmsim/errors.hpp"

namespace povmsim {

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (static_cast<int>(data_.size()) != rows * cols)
    throw ShapeMismatch("matrix entry count does not match dimensions");
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m(rows_, cols_);
  for (int i = 0; i < rows_ * cols_; ++i) m.data_[i] = std::conj(data_[i]);
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw ShapeMismatch("matrix addition shape mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw ShapeMismatch("matrix subtraction shape mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matrix product shape mismatch");
  ComplexMatrix m(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = 0; k < a.cols(); ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

Complex inner_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("inner product shape mismatch");
  Complex s = 0.0;
  const auto& ae = a.entries();
  const auto& be = b.entries();
  for (size_t i = 0; i < ae.size(); ++i) s += std::conj(ae[i]) * be[i];
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ra = 0; ra < a.rows(); ++ra)
    for (int ca = 0; ca < a.cols(); ++ca) {
      const Complex v = a(ra, ca);
      if (v == Complex(0.0, 0.0)) continue;
      for (int rb = 0; rb < b.rows(); ++rb)
        for (int cb = 0; cb < b.cols(); ++cb)
          m(ra * b.rows() + rb, ca * b.cols() + cb) = v * b(rb, cb);
    }
  return m;
}

ComplexMatrix outer(const std::vector<Complex>& v, const std::vector<Complex>& w) {
  ComplexMatrix m(static_cast<int>(v.size()), static_cast<int>(w.size()));
  for (size_t r = 0; r < v.size(); ++r)
    for (size_t c = 0; c < w.size(); ++c) m(static_cast<int>(r), static_cast<int>(c)) = v[r] * std::conj(w[c]);
  return m;
}

ComplexMatrix matvec_to_column(const std::vector<Complex>& v) {
  ComplexMatrix m(static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m(static_cast<int>(i), 0) = v[i];
  return m;
}

}  // namespace povmsim
