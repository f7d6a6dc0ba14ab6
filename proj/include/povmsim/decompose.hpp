#pragma once

#include <optional>

#include "povmsim/povm.hpp"

namespace povmsim {

/// A direction along which a POVM can be split into two POVMs M +- eps X:
/// Hermitian operators supported inside the corresponding effects' supports,
/// summing to zero (and traceless per effect in the trace-preserving
/// variant).
struct Perturbation {
  std::vector<HermitianOperator> operators;
};

/// Numerical ranks of the effects at the configured relative cutoff.
std::vector<int> rank_vector(const Povm& m, double relative_cutoff = 1e-8);

/// Searches the support-constrained (optionally traceless) space for a
/// nonzero perturbation; returns nothing iff the POVM is extremal in the
/// corresponding class. Decided by a null-space computation on the stacked
/// linear constraints.
std::optional<Perturbation> find_perturbation(const Povm& m, bool trace_preserving,
                                              const Tolerances& tol = default_tolerances());

/// Largest t >= 0 such that every effect of M + tX stays PSD. Requires the
/// support containment supp(X_i) in supp(M_i); computed per effect as a
/// minimum generalized eigenvalue on the support.
double boundary_step(const Povm& m, const std::vector<HermitianOperator>& x,
                     const Tolerances& tol = default_tolerances());

/// Recursive splitting along perturbation directions until every member is
/// extremal. The result mixes back to m.
std::vector<std::pair<double, Povm>> decompose_extremal(const Povm& m,
                                                        const Tolerances& tol = default_tolerances());

/// Constructive projective decomposition of a trace-one three-outcome qutrit
/// POVM: rank reduction by projector subtraction, the traceless-perturbation
/// step for the (2,2,2) class, and the dichotomic reduction when a rank-one
/// effect is present. Every member is a rank-one projective measurement.
std::vector<std::pair<double, Povm>> decompose_trace_one_qutrit(
    const Povm& m, const Tolerances& tol = default_tolerances());

}  // namespace povmsim
