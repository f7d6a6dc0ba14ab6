#pragma once

#include "povmsim/polytope.hpp"
#include "povmsim/povm.hpp"
#include "povmsim/sdp.hpp"

namespace povmsim {

struct CovariantSample {
  double t = 1.0;        // critical visibility for projective simulability
  double t3 = 1.0;       // critical visibility for three-outcome simulability
};

struct CovariantSearchResult {
  Povm best;
  double best_t = 1.0;
  int best_index = -1;
  std::vector<CovariantSample> samples;
};

/// Heuristic search over covariant qutrit POVMs built from rank-one fiducial
/// seeds (1/3)|phi><phi|: a uniform sampling stage followed by an optional
/// stochastic descent around the best fiducial (`descent_steps` additional
/// seeds with shrinking perturbation size). Both the projective-simulability
/// visibility and its three-outcome relaxation are evaluated for every seed;
/// seeds are drawn up front so runs are reproducible for any worker count.
/// The covariant programs are heavily degenerate, so the default solver
/// targets match the vertex-scan ones.
CovariantSearchResult covariant_search(int seeds, uint64_t rng_seed, int jobs = 1,
                                       const sdp::SolverOptions& opts = polytope::scan_solver_defaults(),
                                       int descent_steps = 0);

/// Outer polytope of covariant quasi-POVM seeds: trace-1/3 Hermitian
/// operators with positivity relaxed to `num_states` random pure-state
/// facets. Coordinates are the eight traceless components of the seed.
polytope::HRep build_covariant_qutrit_polytope(int num_states, uint64_t rng_seed);

/// Seed operator encoded by a point of the covariant polytope.
HermitianOperator covariant_vertex_to_seed(const std::vector<double>& v);

struct CovariantBoundResult {
  double t_lower = 1.0;
  int vertex_count = 0;
  std::vector<double> argmin_vertex;
};

/// Per-vertex qutrit visibility scan over the covariant polytope: a lower
/// bound on the robustness of every covariant qutrit POVM. Long-running at
/// the paper's 180-state scale.
CovariantBoundResult scan_covariant_lower_bound(const polytope::HRep& h, int jobs = 1,
                                                const sdp::SolverOptions& opts = polytope::scan_solver_defaults());

}  // namespace povmsim
