#include "povmsim/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "povmsim/errors.hpp"

namespace povmsim::fixtures {

HermitianOperator qubit_effect(double alpha, double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m(0, 0) = Complex(alpha + z, 0.0);
  m(1, 1) = Complex(alpha - z, 0.0);
  m(0, 1) = Complex(x, -y);
  m(1, 0) = Complex(x, y);
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_x() { return qubit_effect(0.0, 1.0, 0.0, 0.0); }
HermitianOperator pauli_y() { return qubit_effect(0.0, 0.0, 1.0, 0.0); }
HermitianOperator pauli_z() { return qubit_effect(0.0, 0.0, 0.0, 1.0); }

std::array<std::array<double, 3>, 4> tetra_bloch_vectors() {
  const double s = 1.0 / std::sqrt(3.0);
  return {{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
}

Povm tetra() {
  Povm p;
  p.dim = 2;
  for (const auto& n : tetra_bloch_vectors())
    p.effects.push_back(qubit_effect(0.25, 0.25 * n[0], 0.25 * n[1], 0.25 * n[2]));
  return p;
}

namespace {

std::vector<Complex> trine_vector(int j) {
  const double a = std::numbers::pi * j / 3.0;
  return {Complex(std::cos(a), 0.0), Complex(std::sin(a), 0.0)};
}

}  // namespace

Povm trine() {
  Povm p;
  p.dim = 2;
  for (int j = 1; j <= 3; ++j) {
    const auto v = trine_vector(j);
    ComplexMatrix e = outer(v, v);
    e *= Complex(2.0 / 3.0, 0.0);
    p.effects.emplace_back(std::move(e));
  }
  return p;
}

Povm modified_trine() {
  Povm p;
  p.dim = 3;
  for (int j = 1; j <= 3; ++j) {
    const auto v2 = trine_vector(j);
    std::vector<Complex> v = {v2[0], v2[1], Complex(0.0, 0.0)};
    ComplexMatrix e = outer(v, v);
    e *= Complex(2.0 / 3.0, 0.0);
    if (j == 3) e(2, 2) += 1.0;
    p.effects.emplace_back(std::move(e));
  }
  return p;
}

Povm double_tetra() {
  const Povm t = tetra();
  Povm p;
  p.dim = 4;
  for (int i = 0; i < 4; ++i) {
    ComplexMatrix e(4, 4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        e(r, c) = t.effects[i](r, c);
        e(2 + r, 2 + c) = t.effects[i](r, c);
      }
    p.effects.emplace_back(std::move(e));
  }
  return p;
}

ComplexMatrix weyl_displacement(int j, int k, int d) {
  ComplexMatrix m(d, d);
  const double base = 2.0 * std::numbers::pi / d;
  const Complex global = std::polar(1.0, base * 0.5 * j * k);
  for (int col = 0; col < d; ++col) {
    const Complex phase = std::polar(1.0, base * j * col);
    m((k + col) % d, col) = global * phase;
  }
  return m;
}

Povm covariant_qutrit(const HermitianOperator& seed) {
  if (seed.dim() != 3) throw InvalidSeed("seed must be a 3x3 operator");
  if (std::abs(seed.trace_real() - 1.0 / 3.0) > 1e-9)
    throw InvalidSeed("seed trace must equal 1/3, got " + std::to_string(seed.trace_real()));
  if (!is_psd(seed, 1e-9)) throw InvalidSeed("seed is not positive semidefinite");
  Povm p;
  p.dim = 3;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix d = weyl_displacement(j, k, 3);
      p.effects.emplace_back(d * seed.matrix() * d.adjoint());
    }
  return p;
}

ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  // Gram-Schmidt on the columns of a Ginibre sample.
  for (int c = 0; c < d; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      Complex proj = 0.0;
      for (int r = 0; r < d; ++r) proj += std::conj(g(r, prev)) * g(r, c);
      for (int r = 0; r < d; ++r) g(r, c) -= proj * g(r, prev);
    }
    double norm = 0.0;
    for (int r = 0; r < d; ++r) norm += std::norm(g(r, c));
    norm = std::sqrt(norm);
    for (int r = 0; r < d; ++r) g(r, c) /= norm;
  }
  return g;
}

std::vector<Complex> random_pure_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> v(d);
  double norm = 0.0;
  for (auto& z : v) {
    z = Complex(gauss(rng), gauss(rng));
    norm += std::norm(z);
  }
  norm = std::sqrt(norm);
  for (auto& z : v) z /= norm;
  return v;
}

HermitianOperator random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho *= Complex(1.0 / rho.trace().real(), 0.0);
  return HermitianOperator(std::move(rho));
}

namespace {

Povm wishart_povm(int d, int n, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexMatrix> w;
  ComplexMatrix total(d, d);
  for (int i = 0; i < n; ++i) {
    ComplexMatrix g(d, rank);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < rank; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    ComplexMatrix gg = g * g.adjoint();
    total += gg;
    w.push_back(std::move(gg));
  }
  const HermitianOperator s = inverse_sqrt_psd(HermitianOperator(total));
  Povm p;
  p.dim = d;
  for (auto& gg : w) p.effects.emplace_back(s.matrix() * gg * s.matrix());
  return p;
}

}  // namespace

Povm random_povm(int d, int n, std::mt19937_64& rng) { return wishart_povm(d, n, d, rng); }

Povm random_rank_one_povm(int d, int n, std::mt19937_64& rng) { return wishart_povm(d, n, 1, rng); }

Povm random_projective(int d, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(d, rng);
  Povm p;
  p.dim = d;
  for (int c = 0; c < d; ++c) {
    ComplexMatrix e(d, d);
    for (int r1 = 0; r1 < d; ++r1)
      for (int r2 = 0; r2 < d; ++r2) e(r1, r2) = u(r1, c) * std::conj(u(r2, c));
    p.effects.emplace_back(std::move(e));
  }
  return p;
}

Povm random_trace_one_qutrit(std::mt19937_64& rng, int members) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> w(members);
  double total = 0.0;
  for (auto& x : w) {
    x = gamma(rng);
    total += x;
  }
  std::vector<std::pair<double, Povm>> parts;
  for (int k = 0; k < members; ++k) parts.emplace_back(w[k] / total, random_projective(3, rng));
  return mix(parts);
}

}  // namespace povmsim::fixtures
