#pragma once

#include <array>

#include "povmsim/povm.hpp"
#include "povmsim/sdp.hpp"
#include "povmsim/simulability.hpp"

namespace povmsim::polytope {

/// Facet description a.x <= b (plus optional equalities) of a bounded
/// polyhedron in R^D.
struct HRep {
  int dimension = 0;
  std::vector<std::pair<std::vector<double>, double>> inequalities;
  std::vector<std::pair<std::vector<double>, double>> equalities;
};

struct VRep {
  std::vector<std::vector<double>> vertices;
};

/// Normalised effect tuple with positivity relaxed to a finite family of
/// facet inequalities; effects need not be PSD.
struct QuasiPovm {
  int dim = 0;
  std::vector<HermitianOperator> effects;
};

struct QubitPolytopeSpec {
  std::vector<std::array<double, 3>> directions;  // facet normals for the third and fourth effects
  int polygon_sides = 20;                         // half-polygon facets for the second effect
  bool tangent_to_tetra = false;                  // append the extra tetra-pointing facets
};

/// Outer polytope for reduced four-outcome qubit quasi-POVMs in R^8
/// (coordinates: alpha1; alpha2, x2, y2; alpha3, x3, y3, z3; the first
/// effect is rank-one with Bloch vector along +x, the fourth is eliminated
/// by normalisation).
HRep build_qubit_polytope(const QubitPolytopeSpec& spec);

/// Incremental double-description vertex enumeration, facets inserted by
/// decreasing infinity norm. Exact on rational-friendly instances; nearly
/// coincident vertices are consolidated.
VRep enumerate_vertices(const HRep& h, const Tolerances& tol = default_tolerances());

/// Reconstructs the four quasi-effects (including the eliminated fourth) from
/// a reduced coordinate vector.
QuasiPovm vertex_to_quasipovm(const std::vector<double>& v);

/// Rotates a four-outcome qubit POVM into the reduced frame (first effect
/// Bloch vector on +x, second in the upper xy half-plane) and encodes it.
/// The first effect must be rank one.
std::vector<double> encode_reduced(const Povm& m);

/// Solver settings used by the vertex scans: the quasi-POVM programs are
/// routinely degenerate, and these targets sit above the double-precision
/// conditioning floor while remaining far tighter than the 1e-4 scale of the
/// bounds they feed.
inline sdp::SolverOptions scan_solver_defaults() {
  sdp::SolverOptions opts;
  opts.feas_tol = 1e-6;
  opts.gap_tol = 1e-5;
  return opts;
}

struct ScanResult {
  double t_delta = 1.0;
  std::vector<double> argmin_vertex;
  std::vector<double> per_vertex_t;
  int vertex_count = 0;
  double enumeration_seconds = 0.0;
  double scan_seconds = 0.0;
};

/// Visibility of every vertex (two-outcome program formally extended to
/// quasi-POVMs), reduced deterministically to the minimum with lexicographic
/// tie-breaking. `jobs > 1` distributes vertices over an OpenMP worker pool;
/// the jobs = 1 path is the serial reference the tests compare against.
ScanResult scan_vertices(const VRep& v, int jobs = 1,
                         const sdp::SolverOptions& opts = scan_solver_defaults());

/// Enumerate-then-scan convenience wrapper.
ScanResult scan_lower_bound(const HRep& h, int jobs = 1,
                            const sdp::SolverOptions& opts = scan_solver_defaults());

/// Werner-state locality bound t^2 * p_star.
double werner_bound(double t, double p_star);

std::vector<std::array<double, 3>> octahedron_directions();
std::vector<std::array<double, 3>> icosahedron_with_dual_directions();
std::vector<std::array<double, 3>> truncated_icosahedron_with_dual_directions();

/// Named instances used by the CLI: "octahedron" (sanity scale),
/// "icosahedron" (desk scale), "paper" (the ~850k-vertex construction).
QubitPolytopeSpec preset(const std::string& name);

}  // namespace povmsim::polytope
