#pragma once

#include "povmsim/povm.hpp"

namespace povmsim {

/// Realisation of an n-outcome POVM on H as a randomisation over rank-one
/// projective measurements on H (x) H' with dim H' = d, measured against a
/// fixed ancilla state. `outcome_map` collapses the dilated outcomes back to
/// the original n.
struct Dilation {
  int system_dim = 0;
  int ancilla_dim = 0;
  std::vector<Complex> ancilla_state;
  SimulationStrategy strategy;                 // members act on H (x) H'
  PostProcessing outcome_map;
  std::vector<ComplexMatrix> member_unitaries; // completed basis matrix per member
};

/// Builds the dilation: rank-one refinement, extremal decomposition, and a
/// unitary completion per extremal member. The default ancilla state is e0.
Dilation dilate(const Povm& m, const std::vector<Complex>& phi = {});

/// Maximum Born-rule deviation |tr(rho M_i) - tr((rho (x) phi phi*) N_i)|
/// over `trials` random states and all outcomes.
double verify_dilation(const Povm& m, const Dilation& dilation, int trials, uint64_t seed = 2);

}  // namespace povmsim
