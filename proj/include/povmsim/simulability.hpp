#pragma once

#include <optional>

#include "povmsim/povm.hpp"
#include "povmsim/sdp.hpp"

namespace povmsim {

/// One sub-measurement N_X of a simulability certificate: effects live only
/// on the outcomes listed in `support` (stored aligned with it; other
/// outcomes are zero). Trace-aligned parts are the qutrit three-outcome
/// components whose effects all carry trace `weight`.
struct SubMeasurement {
  std::vector<int> support;
  std::vector<HermitianOperator> effects;
  double weight = 0.0;
  bool trace_aligned = false;
};

struct SolverDiagnostics {
  sdp::SolveStatus status = sdp::SolveStatus::NumericalTrouble;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

/// Critical-visibility certificate: the decomposition of the depolarised
/// measurement at visibility t_star into sub-measurements.
struct VisibilityResult {
  double t_star = 0.0;
  int dim = 0;
  int outcomes = 0;
  std::vector<SubMeasurement> parts;
  SolverDiagnostics diagnostics;
};

struct VisibilityOptions {
  sdp::SolverOptions solver;
  /// When set, solves the feasibility variant with the visibility pinned to
  /// this value instead of maximising it.
  std::optional<double> fixed_visibility;
  /// Verify the certificate reconstruction invariant after solving.
  bool check_certificate = true;
};

/// Largest t such that the depolarised input is a convex combination of
/// m-outcome sub-measurements. For d = 2, m = 2 this is the critical
/// visibility for projective simulability.
VisibilityResult visibility_m_outcome(const Povm& m, int m_outcomes, const VisibilityOptions& = {});

/// The same program on a tuple of Hermitian "quasi-effects" summing to the
/// identity: positivity is required of the decomposition variables only.
VisibilityResult visibility_m_outcome(int dim, const std::vector<HermitianOperator>& effects,
                                      int m_outcomes, const VisibilityOptions& = {});

/// Critical visibility for projective simulability of a qutrit measurement:
/// two-outcome parts plus trace-aligned three-outcome parts.
VisibilityResult visibility_qutrit_projective(const Povm& m, const VisibilityOptions& = {});

/// Quasi-measurement variant of the qutrit program (effects need not be PSD).
VisibilityResult visibility_qutrit_projective(const std::vector<HermitianOperator>& effects,
                                              const VisibilityOptions& = {});

struct SimulabilityCheck {
  bool simulable = false;
  VisibilityResult visibility;
};

/// m-outcome simulability as a thresholded visibility computation
/// (t_star >= 1 - 1e-6); the certificate is returned when simulable.
SimulabilityCheck check_m_simulable(const Povm& m, int m_outcomes, const VisibilityOptions& = {});

/// Expands a certificate into an executable strategy over projective
/// measurements: dichotomic parts via spectral thresholding, trace-aligned
/// qutrit parts via the constructive projective decomposition.
SimulationStrategy strategy_from_certificate(const Povm& m, const VisibilityResult& cert);

}  // namespace povmsim
