#pragma once

#include <array>
#include <random>

#include "povmsim/povm.hpp"

namespace povmsim::fixtures {

/// alpha I + x sigma_x + y sigma_y + z sigma_z.
HermitianOperator qubit_effect(double alpha, double x, double y, double z);

HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

/// Bloch directions (1,1,1)/sqrt3, (1,-1,-1)/sqrt3, (-1,1,-1)/sqrt3, (-1,-1,1)/sqrt3.
std::array<std::array<double, 3>, 4> tetra_bloch_vectors();

/// The four-outcome tetrahedral qubit POVM with effects (I + n_i.sigma)/4.
Povm tetra();

/// Three rank-one qubit effects (2/3)|psi_i><psi_i| at 120-degree Bloch angles.
Povm trine();

/// The trine embedded in C^3 with |2><2| added to the third effect.
Povm modified_trine();

/// Two tetrahedral POVMs supported on orthogonal 2-dim subspaces of C^4,
/// summed outcome-wise: a trace-one extremal 4-outcome POVM.
Povm double_tetra();

/// Discrete Weyl-Heisenberg displacement on C^d with phase convention
/// omega^{jk/2} X^k Z^j (Z|m> = omega^m |m>, X|m> = |m+1 mod d>).
ComplexMatrix weyl_displacement(int j, int k, int d);

/// Nine-effect qutrit POVM covariant under the discrete displacement group,
/// generated from a PSD seed of trace 1/3. Throws InvalidSeed otherwise.
Povm covariant_qutrit(const HermitianOperator& seed);

// Random generators used by tests, the covariant search and the CLI. All draw
// from the caller's engine so runs are reproducible per seed.

ComplexMatrix random_unitary(int d, std::mt19937_64& rng);
std::vector<Complex> random_pure_state(int d, std::mt19937_64& rng);
HermitianOperator random_density(int d, std::mt19937_64& rng);

/// n Wishart-style effects M_i = S^{-1/2} G_i G_i^dag S^{-1/2}.
Povm random_povm(int d, int n, std::mt19937_64& rng);

/// Same construction with rank-one G_i, giving rank-one effects.
Povm random_rank_one_povm(int d, int n, std::mt19937_64& rng);

/// Random mixture of `members` rank-one projective qutrit measurements:
/// a generic element of the trace-one three-outcome qutrit set.
Povm random_trace_one_qutrit(std::mt19937_64& rng, int members = 4);

/// Random rank-one projective measurement (columns of a random unitary).
Povm random_projective(int d, std::mt19937_64& rng);

}  // namespace povmsim::fixtures
