#include "povmsim/protocols.hpp"

#include <cmath>

#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"

namespace povmsim {

SimulationStrategy protocol_inverse_d(const Povm& m, MissReassignment reassignment) {
  const int d = m.dim;
  const int n = m.outcomes();
  std::vector<double> alpha(n);
  std::vector<ComplexMatrix> proj(n);
  for (int i = 0; i < n; ++i) {
    const auto eig = eig_hermitian(m.effects[i]);
    const double top = eig.eigenvalues.front();
    if (d > 1 && eig.eigenvalues[1] > 1e-9 * std::max(1.0, top))
      throw EffectNotRankOne("effect " + std::to_string(i) + " has rank > 1");
    alpha[i] = m.effects[i].trace_real();
    if (alpha[i] > 1e-14) {
      ComplexMatrix p(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          p(r, c) = eig.eigenvectors(r, 0) * std::conj(eig.eigenvectors(c, 0));
      proj[i] = std::move(p);
    } else {
      alpha[i] = 0.0;
      proj[i] = ComplexMatrix::zero(d, d);
    }
  }
  if (reassignment == MissReassignment::UniformOffDiagonal) {
    if (n != d * d) throw InvalidArgument("uniform reassignment needs n = d^2 outcomes");
    for (double a : alpha)
      if (std::abs(a - 1.0 / d) > 1e-9)
        throw InvalidArgument("uniform reassignment needs effects of trace 1/d");
  }

  SimulationStrategy s;
  const ComplexMatrix id = ComplexMatrix::identity(d);
  for (int k = 0; k < n; ++k) {
    Povm member;
    member.dim = d;
    member.effects.assign(2 * n, HermitianOperator::zero(d));
    member.effects[k] = HermitianOperator(proj[k]);
    member.effects[n + k] = HermitianOperator(id - proj[k]);
    s.members.push_back(std::move(member));
    s.weights.push_back(alpha[k] / d);
  }
  PostProcessing q(2 * n, n);
  for (int j = 0; j < n; ++j) q(j, j) = 1.0;  // hit: report the member's outcome
  for (int k = 0; k < n; ++k) {
    if (reassignment == MissReassignment::ByWeight) {
      for (int i = 0; i < n; ++i) q(n + k, i) = alpha[i] / d;
    } else {
      for (int i = 0; i < n; ++i) q(n + k, i) = (i == k) ? 0.0 : 1.0 / (n - 1);
    }
  }
  s.post = std::move(q);
  return s;
}

SimulationStrategy protocol_tetra_optimal() {
  const auto dirs = fixtures::tetra_bloch_vectors();
  SimulationStrategy s;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double u[3];
      double norm = 0.0;
      for (int a = 0; a < 3; ++a) {
        u[a] = dirs[i][a] - dirs[j][a];
        norm += u[a] * u[a];
      }
      norm = std::sqrt(norm);
      for (double& x : u) x /= norm;
      const HermitianOperator pi = fixtures::qubit_effect(0.5, 0.5 * u[0], 0.5 * u[1], 0.5 * u[2]);
      Povm member;
      member.dim = 2;
      member.effects.assign(4, HermitianOperator::zero(2));
      member.effects[i] = pi;
      member.effects[j] = HermitianOperator(ComplexMatrix::identity(2) - pi.matrix());
      s.members.push_back(std::move(member));
      s.weights.push_back(1.0 / 6.0);
    }
  return s;
}

}  // namespace povmsim
