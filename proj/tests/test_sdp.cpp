#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/sdp.hpp"
#include "support/oracles.hpp"

using namespace povmsim;
using sdp::SdpProblem;
using sdp::SolveStatus;

TEST_CASE("scalar LP: maximize t subject to t <= 1") {
  SdpProblem p;
  const int t = p.add_scalar_block_bounded(1.0);
  p.objective_scalar(t, 1.0);
  const auto sol = p.solve();
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.scalar_blocks[t] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("determinant boundary: maximize t with [[1,t],[t,1]] psd") {
  SdpProblem p;
  const int x = p.add_hermitian_block(2);
  ComplexMatrix e00(2, 2), e11(2, 2), c01(2, 2);
  e00(0, 0) = 1.0;
  e11(1, 1) = 1.0;
  c01(0, 1) = 0.5;
  c01(1, 0) = 0.5;
  int eq = p.add_equality(1.0);
  p.equality_matrix_term(eq, x, HermitianOperator(e00));
  eq = p.add_equality(1.0);
  p.equality_matrix_term(eq, x, HermitianOperator(e11));
  p.objective_matrix(x, HermitianOperator(c01));  // <C,X> = Re X01
  const auto sol = p.solve();
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.hermitian_blocks[x](0, 1).real() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("embed_hermitian") {
  ComplexMatrix hr(2, 2);
  hr(0, 0) = 2.0;
  hr(0, 1) = hr(1, 0) = 0.5;
  hr(1, 1) = -1.0;
  const auto e = sdp::embed_hermitian(HermitianOperator(hr));
  CHECK(e.rows() == 4);
  CHECK(e(0, 2).real() == 0.0);
  CHECK(e(0, 0).real() == 2.0);
  CHECK(e(2, 2).real() == 2.0);
  CHECK(e(1, 3).real() == 0.0);

  const auto ey = sdp::embed_hermitian(fixtures::pauli_y());
  const auto eig = eig_hermitian(HermitianOperator(ey));
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[2] == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues[3] == doctest::Approx(-1.0));

  const auto ei = sdp::embed_hermitian(HermitianOperator::identity(3));
  ComplexMatrix diff = ei;
  diff -= ComplexMatrix::identity(6);
  CHECK(diff.max_abs() == 0.0);
}

TEST_CASE("solver is deterministic") {
  for (int trial = 0; trial < 3; ++trial) {
    std::mt19937_64 r1(1000 + trial), r2(1000 + trial);
    const auto a = oracles::run_random_oracle_sdp(r1);
    const auto b = oracles::run_random_oracle_sdp(r2);
    CHECK(std::abs(a.sdp_value - b.sdp_value) <= 1e-9);
  }
}

TEST_CASE("infeasible problem yields a Farkas ray") {
  SdpProblem p;
  const int x = p.add_scalar_block();
  const int eq = p.add_equality(-1.0);
  p.equality_scalar_term(eq, x, 1.0);
  p.objective_scalar(x, 0.0);
  const auto sol = p.solve();
  CHECK(sol.status == SolveStatus::Infeasible);
  REQUIRE(sol.farkas_ray.size() == 1);
  CHECK(sol.farkas_ray[0] * (-1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ill-formed problems are rejected") {
  SdpProblem empty;
  CHECK_THROWS_AS(empty.solve(), IllFormedProblem);

  SdpProblem nocon;
  nocon.add_scalar_block();
  CHECK_THROWS_AS(nocon.solve(), IllFormedProblem);
}

TEST_CASE("oracle equivalence on random small SDPs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pair = oracles::run_random_oracle_sdp(rng);
    CHECK(std::abs(pair.sdp_value - pair.oracle_value) <=
          1e-4 * std::max(1.0, std::abs(pair.oracle_value)));
  }
}

TEST_CASE("weak duality holds at near-feasible iterates (debug check)") {
  SdpProblem p;
  const int t = p.add_scalar_block_bounded(1.0);
  const int x = p.add_hermitian_block(2);
  ComplexMatrix c01(2, 2);
  c01(0, 1) = Complex(0.0, -0.5);
  c01(1, 0) = Complex(0.0, 0.5);
  const int eq = p.add_equality(0.25);
  p.equality_matrix_term(eq, x, HermitianOperator(c01));
  p.equality_scalar_term(eq, t, 0.125);
  const int eq2 = p.add_equality(1.0);
  p.equality_matrix_term(eq2, x, HermitianOperator::identity(2));
  p.objective_scalar(t, 1.0);
  sdp::SolverOptions opts;
  opts.check_weak_duality = true;
  const auto sol = p.solve(opts);
  CHECK(sol.status == SolveStatus::Optimal);
  // The gap can sit at the feasibility scale of the iterate, never beyond it.
  CHECK(sol.objective <= sol.dual_objective + 1e-9 * std::max(1.0, std::abs(sol.objective)) +
                             10.0 * (sol.primal_residual + sol.dual_residual));
}

TEST_CASE("group elimination matches the dense path") {
  for (int trial = 0; trial < 3; ++trial) {
    auto build = [&](bool grouped) {
      SdpProblem p;
      const int t = p.add_scalar_block_bounded(1.0);
      p.objective_scalar(t, 1.0);
      std::vector<int> blocks;
      for (int b = 0; b < 3; ++b) blocks.push_back(p.add_hermitian_block(2));
      for (int b = 0; b < 3; ++b) {
        ComplexMatrix e00(2, 2), e11(2, 2);
        e00(0, 0) = 1.0;
        e11(1, 1) = 1.0;
        int eq = p.add_equality(1.0, grouped ? b : SdpProblem::kShared);
        p.equality_matrix_term(eq, blocks[b], HermitianOperator(e00));
        eq = p.add_equality(1.0, grouped ? b : SdpProblem::kShared);
        p.equality_matrix_term(eq, blocks[b], HermitianOperator(e11));
      }
      ComplexMatrix c01(2, 2);
      c01(0, 1) = 0.5;
      c01(1, 0) = 0.5;
      const int eq = p.add_equality(0.0);
      for (int b = 0; b < 3; ++b) p.equality_matrix_term(eq, blocks[b], HermitianOperator(c01));
      p.equality_scalar_term(eq, t, -3.0);
      return p.solve();
    };
    const auto a = build(true);
    const auto b = build(false);
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(std::abs(a.objective - b.objective) <= 1e-7);
  }
}

TEST_CASE("problem dump is line oriented and non-empty") {
  SdpProblem p;
  const int t = p.add_scalar_block_bounded(1.0);
  const int x = p.add_hermitian_block(2);
  const int eq = p.add_equality(1.0);
  p.equality_matrix_term(eq, x, HermitianOperator::identity(2));
  p.equality_scalar_term(eq, t, 1.0);
  p.objective_scalar(t, 1.0);
  std::ostringstream os;
  p.dump(os);
  const std::string s = os.str();
  CHECK(s.find("SDPDUMP v1") == 0);
  CHECK(s.find("block 0 hermitian 2") != std::string::npos);
  CHECK(s.find("eq 0 1") != std::string::npos);
}
