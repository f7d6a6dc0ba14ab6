#include "povmsim/hermlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "povmsim/errors.hpp"

namespace povmsim {

HermitianOperator::HermitianOperator(ComplexMatrix m, const Tolerances& tol) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols()) throw NonHermitianInput("matrix is not square");
  double dev = 0.0;
  for (int r = 0; r < matrix_.rows(); ++r)
    for (int c = r; c < matrix_.cols(); ++c)
      dev = std::max(dev, std::abs(matrix_(r, c) - std::conj(matrix_(c, r))));
  const double scale = std::max(1.0, matrix_.max_abs());
  if (dev > tol.hermiticity * scale)
    throw NonHermitianInput("deviation from conjugate transpose " + std::to_string(dev));
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  matrix_ += o.matrix_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  matrix_ -= o.matrix_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  matrix_ *= Complex(s, 0.0);
  return *this;
}

namespace {

// One cyclic sweep of two-sided complex Jacobi rotations. Each (p,q) pivot is
// first phase-rotated so the pivot entry is real, then eliminated with a real
// rotation. V accumulates the product of all rotations.
double jacobi_sweep(ComplexMatrix& a, ComplexMatrix& v) {
  const int n = a.rows();
  double off = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const Complex apq = a(p, q);
      const double mag = std::abs(apq);
      off = std::max(off, mag);
      if (mag == 0.0) continue;
      const Complex phase = apq / mag;
      const double app = a(p, p).real();
      const double aqq = a(q, q).real();
      // Inner rotation (|theta| <= pi/4) solving t^2 + 2*tau*t - 1 = 0.
      const double tau = (app - aqq) / (2.0 * mag);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const Complex s = (t * c) * phase;
      // Columns: [p q] <- [p q] * [[c, -conj(s)], [s, c]] pattern adapted so
      // that the rotated a(p,q) vanishes.
      for (int k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp + std::conj(s) * akq;
        a(k, q) = -s * akp + c * akq;
      }
      for (int k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk + s * aqk;
        a(q, k) = -std::conj(s) * apk + c * aqk;
      }
      for (int k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp + std::conj(s) * vkq;
        v(k, q) = -s * vkp + c * vkq;
      }
    }
  return off;
}

}  // namespace

EigenDecomposition eig_hermitian(const HermitianOperator& h) {
  const int n = h.dim();
  ComplexMatrix a = h.matrix();
  // Work on the exactly Hermitian part; the constructor certified the input
  // within tolerance.
  for (int r = 0; r < n; ++r) {
    a(r, r) = Complex(a(r, r).real(), 0.0);
    for (int c = r + 1; c < n; ++c) {
      const Complex m = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = m;
      a(c, r) = std::conj(m);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, a.max_abs());
  for (int sweep = 0; sweep < 60; ++sweep) {
    const double off = jacobi_sweep(a, v);
    if (off <= 1e-15 * scale) break;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] > diag[j]; });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

bool is_psd(const HermitianOperator& a, double tol) { return min_eigenvalue(a) >= -tol; }

double min_eigenvalue(const HermitianOperator& a) {
  const auto eig = eig_hermitian(a);
  return eig.eigenvalues.back();
}

double max_eigenvalue(const HermitianOperator& a) {
  const auto eig = eig_hermitian(a);
  return eig.eigenvalues.front();
}

ComplexMatrix complete_to_unitary(const ComplexMatrix& columns, const Tolerances& tol) {
  const int n = columns.rows();
  const int k = columns.cols();
  if (k > n) throw ShapeMismatch("more columns than rows");
  // Verify the given columns are orthonormal.
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Complex g = 0.0;
      for (int r = 0; r < n; ++r) g += std::conj(columns(r, i)) * columns(r, j);
      const Complex target = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(g - target) > tol.orthonormality)
        throw ColumnsNotOrthonormal("input Gram deviation " + std::to_string(std::abs(g - target)));
    }
  ComplexMatrix u(n, n);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < n; ++r) u(r, c) = columns(r, c);
  int filled = k;
  for (int cand = 0; cand < n && filled < n; ++cand) {
    std::vector<Complex> w(n, Complex(0.0, 0.0));
    w[cand] = 1.0;
    // Two rounds of classical Gram-Schmidt for stability.
    for (int round = 0; round < 2; ++round)
      for (int c = 0; c < filled; ++c) {
        Complex proj = 0.0;
        for (int r = 0; r < n; ++r) proj += std::conj(u(r, c)) * w[r];
        for (int r = 0; r < n; ++r) w[r] -= proj * u(r, c);
      }
    double norm = 0.0;
    for (const Complex& z : w) norm += std::norm(z);
    norm = std::sqrt(norm);
    if (norm <= 1e-8) continue;  // candidate nearly dependent on current span
    for (int r = 0; r < n; ++r) u(r, filled) = w[r] / norm;
    ++filled;
  }
  if (filled < n) throw ColumnsNotOrthonormal("could not complete basis");
  return u;
}

HermitianOperator psd_clip(const HermitianOperator& a) {
  const auto eig = eig_hermitian(a);
  const int n = a.dim();
  ComplexMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(0.0, eig.eigenvalues[k]);
    if (lam == 0.0) continue;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) += lam * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
  }
  return HermitianOperator(m);
}

HermitianOperator inverse_sqrt_psd(const HermitianOperator& a, double cutoff) {
  const auto eig = eig_hermitian(a);
  const int n = a.dim();
  ComplexMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    if (eig.eigenvalues[k] <= cutoff) continue;
    const double w = 1.0 / std::sqrt(eig.eigenvalues[k]);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) += w * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
  }
  return HermitianOperator(m);
}

HermitianOperator pseudo_inverse(const HermitianOperator& a, double relative_cutoff) {
  const auto eig = eig_hermitian(a);
  const int n = a.dim();
  const double top = std::abs(eig.eigenvalues.front());
  ComplexMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::abs(eig.eigenvalues[k]) <= relative_cutoff * std::max(top, 1e-300)) continue;
    const double w = 1.0 / eig.eigenvalues[k];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) += w * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
  }
  return HermitianOperator(m);
}

ComplexMatrix support_basis(const HermitianOperator& a, double relative_cutoff) {
  const auto eig = eig_hermitian(a);
  const int n = a.dim();
  double top = 0.0;
  for (double lam : eig.eigenvalues) {
    if (!std::isfinite(lam)) throw InvalidArgument("non-finite spectrum in support computation");
    top = std::max(top, std::abs(lam));
  }
  const double cutoff = relative_cutoff * std::max(top, 1e-300);
  std::vector<int> keep;
  for (int k = 0; k < n; ++k)
    if (std::abs(eig.eigenvalues[k]) > cutoff) keep.push_back(k);
  ComplexMatrix basis(n, static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j)
    for (int i = 0; i < n; ++i) basis(i, static_cast<int>(j)) = eig.eigenvectors(i, keep[j]);
  return basis;
}

int numerical_rank(const HermitianOperator& a, double relative_cutoff) {
  return support_basis(a, relative_cutoff).cols();
}

ComplexMatrix householder_unitary(const std::vector<Complex>& phi) {
  const int n = static_cast<int>(phi.size());
  Complex omega(1.0, 0.0);
  if (std::abs(phi[0]) > 1e-14) omega = phi[0] / std::abs(phi[0]);
  std::vector<Complex> target(n);
  for (int i = 0; i < n; ++i) target[i] = std::conj(omega) * phi[i];
  std::vector<Complex> u(n);
  u[0] = Complex(1.0, 0.0) - target[0];
  for (int i = 1; i < n; ++i) u[i] = -target[i];
  double norm2 = 0.0;
  for (const Complex& z : u) norm2 += std::norm(z);
  ComplexMatrix v = ComplexMatrix::identity(n);
  if (norm2 > 1e-28) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(r, c) -= 2.0 / norm2 * u[r] * std::conj(u[c]);
  }
  return omega * v;
}

}  // namespace povmsim
