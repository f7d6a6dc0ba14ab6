#pragma once

#include "povmsim/povm.hpp"

namespace povmsim {

/// How the 1/d protocol reassigns the outcome after a "miss" (the complement
/// projector fires).
enum class MissReassignment {
  ByWeight,            // output j with probability tr(M_j)/d; realises the 1/d depolarisation
  UniformOffDiagonal,  // output j != i uniformly; needs trace-1/d rank-one effects and
                       // n = d^2, and realises visibility d/(d^2-1)
};

/// Dichotomic-projector simulation of a rank-one POVM. Member k measures
/// (Pi_k, I - Pi_k) embedded at outcome slots (k, n+k); the returned
/// post-processing folds the 2n raw slots back onto the n outcomes.
SimulationStrategy protocol_inverse_d(const Povm& m,
                                      MissReassignment reassignment = MissReassignment::ByWeight);

/// The six-bisectrix strategy for the tetrahedral POVM: pair measurements
/// along the normalised Bloch differences, uniform weight 1/6 each.
SimulationStrategy protocol_tetra_optimal();

}  // namespace povmsim
