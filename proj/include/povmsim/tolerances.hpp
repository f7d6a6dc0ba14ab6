#pragma once

namespace povmsim {

/// Central numeric tolerance configuration. All modules read their defaults
/// from one instance so that thresholds can be tuned in a single place.
struct Tolerances {
  double hermiticity = 1e-12;        // max-abs deviation from the conjugate transpose
  double psd = 1e-9;                 // admit eigenvalues down to -psd
  double orthonormality = 1e-10;     // max-abs deviation of a Gram matrix from I
  double povm_normalization = 1e-9;  // entrywise deviation of sum-of-effects from I
  double projectivity = 1e-9;        // max-abs of E^2 - E
  double rank_cutoff = 1e-8;         // relative eigenvalue cutoff for numerical rank
  double vertex_consolidation = 1e-8;  // merge distance for enumerated vertices
  double facet_activity = 1e-9;        // |a.x - b| threshold for an active facet
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace povmsim
