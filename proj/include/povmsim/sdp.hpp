#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "povmsim/hermlin.hpp"

namespace povmsim::sdp {

/// [[Re H, -Im H], [Im H, Re H]]: real symmetric, PSD iff H is, spectrum
/// doubled in multiplicity. Returned with zero imaginary parts.
ComplexMatrix embed_hermitian(const HermitianOperator& h);

enum class SolveStatus { Optimal, Infeasible, NumericalTrouble };

struct SolverOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iterations = 200;
  double tau_kappa_ratio = 1e-9;  // homogeneous embedding infeasibility cutoff
  double dual_ray_tol = 1e-8;
  double step_fraction = 0.98;
  bool check_weak_duality = false;  // assert primal <= dual once near-feasible
  bool verbose = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalTrouble;
  std::string message;
  double objective = 0.0;  // in the user's (maximisation) sense
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::vector<HermitianOperator> hermitian_blocks;
  std::vector<double> scalar_blocks;
  std::vector<double> dual_multipliers;
  std::vector<double> farkas_ray;  // normalised dual improving ray when Infeasible
};

/// Block-structured semidefinite program in primal standard form:
///   maximise  <objective, X>
///   s.t.      linear equalities, X in (PSD blocks) x (nonnegative scalars).
///
/// Hermitian blocks are handled through the real embedding above; callers
/// state coefficients as complex Hermitian operators and read solutions back
/// the same way.
///
/// Equalities may carry a group id. Constraints in the same group must touch
/// a set of variable blocks disjoint from every other group's (shared
/// constraints, group -1, may touch anything); the solver then eliminates the
/// groups first and factors only the small shared Schur complement. This is
/// what keeps the subset-decomposition programs cheap.
class SdpProblem {
 public:
  static constexpr int kShared = -1;

  int add_hermitian_block(int dim);
  int add_scalar_block();
  int add_scalar_block_bounded(double upper_bound);

  void objective_scalar(int scalar_id, double coeff);
  void objective_matrix(int block_id, const HermitianOperator& c);

  int add_equality(double rhs, int group = kShared);
  void equality_scalar_term(int eq, int scalar_id, double coeff);
  void equality_matrix_term(int eq, int block_id, const HermitianOperator& f);

  /// The dim^2 real equations of:
  ///   sum_k blocks[k].second * X_{blocks[k].first}
  ///   + sum_j scalar_coeffs[j].second * x_{scalar_coeffs[j].first}  ==  rhs.
  void add_matrix_equality(std::span<const std::pair<int, double>> blocks,
                           std::span<const std::pair<int, HermitianOperator>> scalar_coeffs,
                           const HermitianOperator& rhs, int group = kShared);

  SdpSolution solve(const SolverOptions& opts = {}) const;

  /// Line-oriented sparse dump (see README) for cross-checks against
  /// external solvers.
  void dump(std::ostream& os) const;

  // Introspection used by the solver backend.
  struct MatrixTerm {
    int block;
    std::vector<double> coeff;  // embedded real symmetric, stored dense row-major
  };
  struct ScalarTerm {
    int scalar;
    double coeff;
  };
  struct Equality {
    double rhs;
    int group;
    std::vector<MatrixTerm> matrix_terms;
    std::vector<ScalarTerm> scalar_terms;
  };

  const std::vector<int>& hermitian_dims() const { return hermitian_dims_; }
  int scalar_count() const { return scalar_count_; }
  const std::vector<std::pair<int, double>>& scalar_bounds() const { return scalar_bounds_; }
  const std::vector<Equality>& equalities() const { return equalities_; }
  const std::vector<MatrixTerm>& objective_matrix_terms() const { return obj_matrix_; }
  const std::vector<ScalarTerm>& objective_scalar_terms() const { return obj_scalar_; }

 private:
  std::vector<int> hermitian_dims_;
  int scalar_count_ = 0;
  std::vector<std::pair<int, double>> scalar_bounds_;  // (scalar id, upper bound)
  std::vector<Equality> equalities_;
  std::vector<MatrixTerm> obj_matrix_;
  std::vector<ScalarTerm> obj_scalar_;
};

}  // namespace povmsim::sdp
