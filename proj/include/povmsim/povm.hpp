#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "povmsim/hermlin.hpp"

namespace povmsim {

/// An n-outcome measurement: PSD effects summing to the identity. Zero
/// effects are legal and kept positionally so that outcome indices stay
/// stable under post-processing.
struct Povm {
  int dim = 0;
  std::vector<HermitianOperator> effects;

  int outcomes() const { return static_cast<int>(effects.size()); }
};

/// Row-stochastic outcome map: entry (j, i) is the probability q(i|j) of
/// reporting outcome i after observing raw outcome j.
class PostProcessing {
 public:
  PostProcessing() = default;
  PostProcessing(int inputs, int outputs) : inputs_(inputs), outputs_(outputs), q_(inputs * outputs, 0.0) {}

  static PostProcessing identity(int n);

  int inputs() const { return inputs_; }
  int outputs() const { return outputs_; }
  double& operator()(int j, int i) { return q_[j * outputs_ + i]; }
  double operator()(int j, int i) const { return q_[j * outputs_ + i]; }

  /// Row-stochasticity check: every row sums to one within tol.
  void validate(double tol = 1e-12) const;

  /// Composition "apply this, then next": (next o this)(i|k) = sum_j next(i|j) this(j|k).
  PostProcessing then(const PostProcessing& next) const;

 private:
  int inputs_ = 0;
  int outputs_ = 0;
  std::vector<double> q_;
};

/// A randomisation-plus-relabelling recipe over projective measurements:
/// pick member k with probability weights[k], measure it, then push the raw
/// outcome through `post` (when present).
struct SimulationStrategy {
  std::vector<double> weights;
  std::vector<Povm> members;
  std::optional<PostProcessing> post;
};

/// Checks the POVM invariants and returns the input unchanged. Throws
/// EffectNotPsd (with the worst eigenvalue and the offending index) or
/// NotNormalized.
Povm validate(const Povm& m, const Tolerances& tol = default_tolerances());

bool is_valid(const Povm& m, const Tolerances& tol = default_tolerances());

/// Effectwise depolarising map: t M_i + (1-t) tr(M_i)/d I.
Povm depolarize(const Povm& m, double t);

/// Effect i of the result is sum_j q(i|j) M_j.
Povm post_process(const Povm& m, const PostProcessing& q);

/// Convex combination of equally-shaped POVMs.
Povm mix(const std::vector<std::pair<double, Povm>>& weighted);

/// Splits every effect into its eigen-pieces: the result has n*d outcomes,
/// all of rank <= 1 (zero eigenvalues give zero effects), together with the
/// coarse-graining that maps it back onto m. Slot (i,j) sits at index i*d+j.
std::pair<Povm, PostProcessing> refine_rank_one(const Povm& m);

/// True iff every effect is idempotent within tol; mutual orthogonality then
/// follows from normalization.
bool is_projective(const Povm& m, double tol);

/// Sufficient PM-simulability test: true if for some outcome k the largest
/// eigenvalues of the other effects sum to at most one. False is inconclusive.
bool sufficient_simulable(const Povm& m);

/// Realises the strategy as a single POVM: mixture of the members followed by
/// the post-processing when present.
Povm apply(const SimulationStrategy& s);

}  // namespace povmsim
