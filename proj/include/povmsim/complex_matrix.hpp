#pragma once

#include <complex>
#include <vector>

namespace povmsim {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sized for the small dimensions this
/// library works at (d <= ~16); no attempt at sparsity or blocking.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(int rows, int cols, std::vector<Complex> entries);

  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const Complex& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  const std::vector<Complex>& entries() const { return data_; }
  std::vector<Complex>& entries() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  Complex trace() const;
  double max_abs() const;     // entrywise infinity norm
  double frobenius() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s, 0.0); }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> data_;
};

/// tr(A^dagger B); reduces to the Hilbert-Schmidt inner product on Hermitian inputs.
Complex inner_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product a (x) b with the first factor major in the index order.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// |v><w| for column vectors given as n x 1 matrices or plain vectors.
ComplexMatrix outer(const std::vector<Complex>& v, const std::vector<Complex>& w);

ComplexMatrix matvec_to_column(const std::vector<Complex>& v);

}  // namespace povmsim
