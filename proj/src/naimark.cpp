#include "povmsim/naimark.hpp"

#include <cmath>
#include <random>

#include "povmsim/decompose.hpp"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"

namespace povmsim {

namespace {

// Product basis |e_k>|f_l> of H (x) H' as vectors in C^{d^2}, ordered with
// l major so that the first d elements span H (x) phi.
std::vector<std::vector<Complex>> product_basis(int d, const ComplexMatrix& ancilla_basis) {
  std::vector<std::vector<Complex>> w;
  w.reserve(d * d);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k) {
      std::vector<Complex> v(d * d, Complex(0.0, 0.0));
      for (int mrow = 0; mrow < d; ++mrow) v[k * d + mrow] = ancilla_basis(mrow, l);
      w.push_back(std::move(v));
    }
  return w;
}

}  // namespace

Dilation dilate(const Povm& m, const std::vector<Complex>& phi_in) {
  const int d = m.dim;
  const int n = m.outcomes();
  std::vector<Complex> phi = phi_in;
  if (phi.empty()) {
    phi.assign(d, Complex(0.0, 0.0));
    phi[0] = 1.0;
  }
  if (static_cast<int>(phi.size()) != d) throw ShapeMismatch("ancilla state dimension mismatch");
  double norm = 0.0;
  for (const auto& z : phi) norm += std::norm(z);
  if (std::abs(norm - 1.0) > 1e-10) throw InvalidArgument("ancilla state must be normalised");

  const auto [refined, coarse] = refine_rank_one(m);
  const auto members = decompose_extremal(refined);

  const int big = d * d;
  const int refined_outcomes = refined.outcomes();  // n*d
  const int dilated_outcomes = std::max(refined_outcomes, big);

  // Ancilla basis with the first column rotated onto phi.
  const ComplexMatrix ancilla_basis = householder_unitary(phi);
  const auto w = product_basis(d, ancilla_basis);

  Dilation out;
  out.system_dim = d;
  out.ancilla_dim = d;
  out.ancilla_state = phi;

  for (const auto& [weight, member] : members) {
    // Assign the d^2 dilated rows: nonzero effects first (in outcome order),
    // then padding rows parked on unused slots.
    std::vector<int> row_slot;
    std::vector<std::vector<Complex>> vecs;
    std::vector<bool> used(dilated_outcomes, false);
    for (int s = 0; s < refined_outcomes; ++s) {
      if (member.effects[s].matrix().max_abs() <= 1e-12) continue;
      const auto eig = eig_hermitian(member.effects[s]);
      const double lam = eig.eigenvalues[0];
      if (eig.eigenvalues.size() > 1 && eig.eigenvalues[1] > 1e-9)
        throw EffectNotRankOne("extremal member carries a rank > 1 effect");
      std::vector<Complex> v(d);
      const double root = std::sqrt(std::max(0.0, lam));
      for (int r = 0; r < d; ++r) v[r] = root * eig.eigenvectors(r, 0);
      vecs.push_back(std::move(v));
      row_slot.push_back(s);
      used[s] = true;
    }
    if (static_cast<int>(vecs.size()) > big)
      throw SolverFailure("extremal member has more than d^2 nonzero effects");
    for (int r = static_cast<int>(vecs.size()); r < big; ++r) {
      vecs.emplace_back(d, Complex(0.0, 0.0));  // padded zero row
      int slot = 0;
      while (used[slot]) ++slot;
      row_slot.push_back(slot);
      used[slot] = true;
    }

    ComplexMatrix cols(big, d);
    for (int r = 0; r < big; ++r)
      for (int j = 0; j < d; ++j) cols(r, j) = vecs[r][j];
    const ComplexMatrix unitary = complete_to_unitary(cols);

    Povm dilated;
    dilated.dim = big;
    dilated.effects.assign(dilated_outcomes, HermitianOperator::zero(big));
    for (int r = 0; r < big; ++r) {
      std::vector<Complex> psi(big, Complex(0.0, 0.0));
      for (int j = 0; j < big; ++j) {
        const Complex a = unitary(r, j);
        if (a == Complex(0.0, 0.0)) continue;
        for (int t = 0; t < big; ++t) psi[t] += a * w[j][t];
      }
      dilated.effects[row_slot[r]] = HermitianOperator(outer(psi, psi));
    }
    out.strategy.members.push_back(std::move(dilated));
    out.strategy.weights.push_back(weight);
    out.member_unitaries.push_back(unitary);
  }

  // Dilated outcome (i, j) reports the original outcome i; padding slots
  // beyond the refined range carry zero probability and report outcome 0.
  PostProcessing map(dilated_outcomes, n);
  for (int s = 0; s < dilated_outcomes; ++s) {
    const int original = (s < refined_outcomes) ? s / d : 0;
    map(s, original) = 1.0;
  }
  out.outcome_map = std::move(map);
  return out;
}

double verify_dilation(const Povm& m, const Dilation& dilation, int trials, uint64_t seed) {
  const int d = m.dim;
  const Povm realized = post_process(apply(dilation.strategy), dilation.outcome_map);
  const ComplexMatrix phi_proj = outer(dilation.ancilla_state, dilation.ancilla_state);
  std::mt19937_64 rng(seed);
  double dev = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const HermitianOperator rho = fixtures::random_density(d, rng);
    const ComplexMatrix big_state = kron(rho.matrix(), phi_proj);
    for (int i = 0; i < m.outcomes(); ++i) {
      const double lhs = (rho.matrix() * m.effects[i].matrix()).trace().real();
      const double rhs = (big_state * realized.effects[i].matrix()).trace().real();
      dev = std::max(dev, std::abs(lhs - rhs));
    }
  }
  return dev;
}

}  // namespace povmsim
