#include <cmath>
#include <random>

#include "doctest.h"
#include "povmsim/covariant.hpp"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/polytope.hpp"

using namespace povmsim;
using namespace povmsim::polytope;

namespace {

HRep cube3() {
  HRep h;
  h.dimension = 3;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> a(3, 0.0);
    a[c] = 1.0;
    h.inequalities.emplace_back(a, 1.0);
    a[c] = -1.0;
    h.inequalities.emplace_back(a, 1.0);
  }
  return h;
}

// The rotated tetrahedron consistent with the reduced frame: first Bloch
// vector on +x, second in the upper xy plane.
Povm rotated_tetra() {
  const double r = 1.0 / 3.0;
  const double s2 = 2.0 * std::sqrt(2.0) / 3.0;
  const double q2 = std::sqrt(2.0) / 3.0;
  const double q6 = std::sqrt(6.0) / 3.0;
  Povm p;
  p.dim = 2;
  p.effects = {
      fixtures::qubit_effect(0.25, 0.25, 0.0, 0.0),
      fixtures::qubit_effect(0.25, -0.25 * r, 0.25 * s2, 0.0),
      fixtures::qubit_effect(0.25, -0.25 * r, -0.25 * q2, 0.25 * q6),
      fixtures::qubit_effect(0.25, -0.25 * r, -0.25 * q2, -0.25 * q6),
  };
  return p;
}

HermitianOperator psd_sqrt(const HermitianOperator& a) {
  const auto eig = eig_hermitian(a);
  const int d = a.dim();
  ComplexMatrix half(d, d);
  for (int k = 0; k < d; ++k) {
    const double lam = std::sqrt(std::max(0.0, eig.eigenvalues[k]));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        half(r, c) += lam * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
  }
  return HermitianOperator(std::move(half));
}

// Random four-outcome qubit POVM with a rank-one first effect.
Povm random_rank_one_first(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const double alpha = u(rng);
  const auto dir = fixtures::random_pure_state(2, rng);
  ComplexMatrix first = outer(dir, dir);
  first *= Complex(alpha, 0.0);
  const HermitianOperator rest(ComplexMatrix::identity(2) - first);
  const HermitianOperator half = psd_sqrt(rest);
  const Povm inner = fixtures::random_povm(2, 3, rng);
  Povm m;
  m.dim = 2;
  m.effects.emplace_back(std::move(first));
  for (const auto& e : inner.effects)
    m.effects.emplace_back(half.matrix() * e.matrix() * half.matrix());
  return m;
}

}  // namespace

TEST_CASE("enumerate_vertices: cube and simplex are exact") {
  const auto cube = enumerate_vertices(cube3());
  CHECK(cube.vertices.size() == 8);
  for (const auto& v : cube.vertices)
    for (double c : v) CHECK(std::abs(std::abs(c) - 1.0) <= 1e-12);

  HRep simplex;
  simplex.dimension = 3;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> a(3, 0.0);
    a[c] = -1.0;
    simplex.inequalities.emplace_back(a, 0.0);
  }
  simplex.inequalities.emplace_back(std::vector<double>{1.0, 1.0, 1.0}, 1.0);
  const auto sv = enumerate_vertices(simplex);
  CHECK(sv.vertices.size() == 4);
}

TEST_CASE("enumerate_vertices: unbounded and oversized inputs are rejected") {
  HRep open;
  open.dimension = 3;
  open.inequalities.emplace_back(std::vector<double>{1.0, 0.0, 0.0}, 1.0);
  CHECK_THROWS_AS(enumerate_vertices(open), Unbounded);

  HRep big;
  big.dimension = 11;
  CHECK_THROWS_AS(enumerate_vertices(big), DimensionTooLarge);
}

TEST_CASE("octahedron instance: deterministic, valid vertices") {
  const HRep h = build_qubit_polytope(preset("octahedron"));
  const auto v1 = enumerate_vertices(h);
  const auto v2 = enumerate_vertices(h);
  CHECK(v1.vertices.size() == v2.vertices.size());
  CHECK(v1.vertices == v2.vertices);
  CHECK(v1.vertices.size() > 10);
  for (const auto& v : v1.vertices)
    for (const auto& [a, b] : h.inequalities) {
      double ax = 0.0;
      for (int c = 0; c < 8; ++c) ax += a[c] * v[c];
      CHECK(ax <= b + 1e-9 * std::max(1.0, std::abs(b) + std::abs(ax)));
    }
}

TEST_CASE("degenerate directions are rejected") {
  QubitPolytopeSpec spec;
  spec.directions = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};  // coplanar
  spec.polygon_sides = 4;
  CHECK_THROWS_AS(build_qubit_polytope(spec), DegenerateDirections);
}

TEST_CASE("vertex_to_quasipovm: normalisation holds and encode round-trips") {
  const HRep h = build_qubit_polytope(preset("octahedron"));
  const auto v = enumerate_vertices(h);
  for (size_t i = 0; i < v.vertices.size(); i += 7) {
    const QuasiPovm q = vertex_to_quasipovm(v.vertices[i]);
    ComplexMatrix sum(2, 2);
    for (const auto& e : q.effects) sum += e.matrix();
    sum -= ComplexMatrix::identity(2);
    CHECK(sum.max_abs() <= 1e-12);
  }

  const QuasiPovm det = vertex_to_quasipovm({0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(det.effects[0].matrix().max_abs() == 0.0);
  ComplexMatrix last = det.effects[3].matrix();
  last -= ComplexMatrix::identity(2);
  CHECK(last.max_abs() == 0.0);

  const Povm tetra = rotated_tetra();
  const auto coords = encode_reduced(tetra);
  const QuasiPovm back = vertex_to_quasipovm(coords);
  for (int i = 0; i < 4; ++i) {
    ComplexMatrix diff = back.effects[i].matrix();
    diff -= tetra.effects[i].matrix();
    CHECK(diff.max_abs() <= 1e-12);
  }
}

TEST_CASE("containment: rank-one-first-effect POVMs satisfy every built polytope") {
  std::mt19937_64 rng(301);
  const HRep octa = build_qubit_polytope(preset("octahedron"));
  const HRep icosa = build_qubit_polytope(preset("icosahedron"));
  for (int trial = 0; trial < 1000; ++trial) {
    const Povm m = random_rank_one_first(rng);
    REQUIRE(is_valid(m));
    const auto coords = encode_reduced(m);
    for (const HRep* h : {&octa, &icosa})
      for (const auto& [a, b] : h->inequalities) {
        double ax = 0.0;
        for (int c = 0; c < 8; ++c) ax += a[c] * coords[c];
        CHECK(ax <= b + 1e-9);
      }
  }
}

TEST_CASE("single-point tetra polytope scans to sqrt(2/3)") {
  const auto coords = encode_reduced(rotated_tetra());
  HRep h;
  h.dimension = 8;
  for (int c = 0; c < 8; ++c) {
    std::vector<double> a(8, 0.0);
    a[c] = 1.0;
    h.equalities.emplace_back(std::move(a), coords[c]);
  }
  const auto v = enumerate_vertices(h);
  REQUIRE(v.vertices.size() == 1);
  sdp::SolverOptions tight;  // this instance is non-degenerate
  const auto res = scan_vertices(v, 1, tight);
  CHECK(res.t_delta == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-5));
}

TEST_CASE("octahedron scan: serial and parallel agree, bound is sound") {
  const HRep h = build_qubit_polytope(preset("octahedron"));
  const auto v = enumerate_vertices(h);
  const auto serial = scan_vertices(v, 1);
  const auto parallel = scan_vertices(v, 2);
  CHECK(serial.t_delta == parallel.t_delta);
  CHECK(serial.per_vertex_t == parallel.per_vertex_t);
  CHECK(serial.argmin_vertex == parallel.argmin_vertex);
  CHECK(serial.t_delta > 0.0);
  CHECK(serial.t_delta <= std::sqrt(2.0 / 3.0) + 1e-6);
}

TEST_CASE("refining the polytope never decreases the bound") {
  QubitPolytopeSpec coarse = preset("octahedron");
  QubitPolytopeSpec fine = coarse;
  for (const auto& d : icosahedron_with_dual_directions()) fine.directions.push_back(d);
  const auto tc = scan_lower_bound(build_qubit_polytope(coarse), 2);
  const auto tf = scan_lower_bound(build_qubit_polytope(fine), 2);
  CHECK(tf.t_delta >= tc.t_delta - 1e-9);
}

TEST_CASE("werner_bound") {
  CHECK(werner_bound(0.8152, 0.68) == doctest::Approx(0.4519).epsilon(1e-3));
  CHECK(werner_bound(1.0, 0.68) == doctest::Approx(0.68));
  CHECK(werner_bound(0.8152, 0.68) > 5.0 / 12.0);
  CHECK_THROWS_AS(werner_bound(1.5, 0.5), InvalidArgument);
}

TEST_CASE("direction sets have the advertised sizes") {
  CHECK(octahedron_directions().size() == 6);
  CHECK(icosahedron_with_dual_directions().size() == 32);
  CHECK(truncated_icosahedron_with_dual_directions().size() == 92);
  for (const auto& v : truncated_icosahedron_with_dual_directions())
    CHECK(std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0) <= 1e-12);
}

TEST_CASE("covariant polytope: seed encoding and facet structure") {
  const auto seed = covariant_vertex_to_seed(std::vector<double>(8, 0.0));
  ComplexMatrix expected = ComplexMatrix::identity(3);
  expected *= Complex(1.0 / 9.0, 0.0);
  ComplexMatrix diff = seed.matrix();
  diff -= expected;
  CHECK(diff.max_abs() <= 1e-14);

  const auto h = build_covariant_qutrit_polytope(24, 7);
  CHECK(h.dimension == 8);
  CHECK(h.inequalities.size() == 24);
  // the maximally mixed seed (origin) is strictly interior
  for (const auto& [a, b] : h.inequalities) {
    (void)a;
    CHECK(b > 0.0);
  }
}

TEST_CASE("covariant_search: small run is reproducible and consistent") {
  const auto res = covariant_search(4, 99, 2);
  const auto res2 = covariant_search(4, 99, 1);
  REQUIRE(res.samples.size() == 4);
  for (int s = 0; s < 4; ++s) {
    CHECK(res.samples[s].t == doctest::Approx(res2.samples[s].t).epsilon(1e-9));
    CHECK(res.samples[s].t <= 1.0 + 1e-9);
    CHECK(res.samples[s].t >= 1.0 / 3.0 - 1e-6);
    CHECK(std::abs(res.samples[s].t - res.samples[s].t3) <= 1e-4);
  }
  CHECK(res.best_t <= 1.0);
  CHECK_NOTHROW(validate(res.best));
}
