#pragma once

#include <vector>

#include "povmsim/complex_matrix.hpp"
#include "povmsim/tolerances.hpp"

namespace povmsim {

/// A square complex matrix certified Hermitian at construction time
/// (within the configured hermiticity tolerance).
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m, const Tolerances& tol = default_tolerances());

  static HermitianOperator identity(int d) { return HermitianOperator(ComplexMatrix::identity(d)); }
  static HermitianOperator zero(int d) { return HermitianOperator(ComplexMatrix::zero(d, d)); }

  int dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  Complex operator()(int r, int c) const { return matrix_(r, c); }

  double trace_real() const { return matrix_.trace().real(); }

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

 private:
  ComplexMatrix matrix_;
};

/// Spectral data of a Hermitian operator: eigenvalues sorted descending,
/// eigenvectors as orthonormal columns aligned with the eigenvalue order.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Cyclic complex Jacobi diagonalisation. Robust at the tiny dimensions this
/// library targets; iterates sweeps until the off-diagonal mass is at
/// round-off level.
EigenDecomposition eig_hermitian(const HermitianOperator& a);

/// True iff the smallest eigenvalue is >= -tol.
bool is_psd(const HermitianOperator& a, double tol);

double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);

/// Extends k orthonormal columns (n x k, k <= n) to a full n x n unitary by
/// Gram-Schmidt over canonical basis candidates taken in index order,
/// skipping near-dependent ones.
ComplexMatrix complete_to_unitary(const ComplexMatrix& columns,
                                  const Tolerances& tol = default_tolerances());

/// Real Hermitian-matrix functions via the eigendecomposition. Eigenvalues
/// below `cutoff` (absolute) are treated as zero where that matters.
HermitianOperator psd_clip(const HermitianOperator& a);
HermitianOperator inverse_sqrt_psd(const HermitianOperator& a, double cutoff = 1e-12);
HermitianOperator pseudo_inverse(const HermitianOperator& a, double relative_cutoff = 1e-10);

/// Orthonormal eigenvectors spanning the numerical support (relative
/// eigenvalue cutoff), returned as columns.
ComplexMatrix support_basis(const HermitianOperator& a, double relative_cutoff);

int numerical_rank(const HermitianOperator& a, double relative_cutoff);

/// Unitary with first column equal to phi, built from a Householder
/// reflection (up to a global phase factor making the map exact).
ComplexMatrix householder_unitary(const std::vector<Complex>& phi);

}  // namespace povmsim
