#include <cmath>
#include <random>

#include "doctest.h"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/naimark.hpp"

using namespace povmsim;

TEST_CASE("dilating a projective measurement reproduces its statistics exactly") {
  Povm comp;
  comp.dim = 2;
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  comp.effects = {HermitianOperator(e0), HermitianOperator(e1)};
  const Dilation dil = dilate(comp);
  CHECK(dil.ancilla_dim == 2);
  CHECK(verify_dilation(comp, dil, 50) <= 1e-9);
}

TEST_CASE("trine dilation: members are rank-one projective on C^4") {
  const Povm trine = fixtures::trine();
  const Dilation dil = dilate(trine);
  CHECK(dil.ancilla_dim == 2);
  for (const auto& member : dil.strategy.members) {
    CHECK(member.dim == 4);
    CHECK(is_projective(member, 1e-9));
    int nonzero = 0;
    for (const auto& e : member.effects) {
      if (e.matrix().max_abs() <= 1e-12) continue;
      ++nonzero;
      const auto eig = eig_hermitian(e);
      CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(std::abs(eig.eigenvalues[1]) <= 1e-9);
    }
    CHECK(nonzero == 4);
  }
  CHECK(verify_dilation(trine, dil, 100) <= 1e-9);
}

TEST_CASE("tetra dilation needs a single extremal member") {
  const Dilation dil = dilate(fixtures::tetra());
  CHECK(dil.strategy.members.size() == 1);
  CHECK(verify_dilation(fixtures::tetra(), dil, 100) <= 1e-9);
}

TEST_CASE("member basis matrices are unitary") {
  const Dilation dil = dilate(fixtures::trine());
  for (const auto& u : dil.member_unitaries) {
    ComplexMatrix gram = u.adjoint() * u;
    gram -= ComplexMatrix::identity(u.rows());
    CHECK(gram.max_abs() <= 1e-10);
  }
}

TEST_CASE("a corrupted dilation fails verification") {
  const Povm trine = fixtures::trine();
  Dilation dil = dilate(trine);
  auto& effects = dil.strategy.members[0].effects;
  // Pick two nonzero slots that report different original outcomes.
  int first = -1, second = -1;
  for (int i = 0; i < static_cast<int>(effects.size()); ++i) {
    if (effects[i].matrix().max_abs() <= 1e-12) continue;
    if (first < 0) {
      first = i;
    } else if (i / trine.dim != first / trine.dim) {
      second = i;
      break;
    }
  }
  REQUIRE(second >= 0);
  std::swap(effects[first], effects[second]);
  CHECK(verify_dilation(trine, dil, 50) > 1e-3);
}

TEST_CASE("dilation of the trivial one-outcome measurement has zero deviation") {
  Povm trivial;
  trivial.dim = 2;
  trivial.effects = {HermitianOperator::identity(2)};
  const Dilation dil = dilate(trivial);
  CHECK(verify_dilation(trivial, dil, 20) <= 1e-10);
}

TEST_CASE("random POVMs dilate with deviation at rounding scale") {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 10; ++trial) {
    const Povm m = (trial % 2 == 0) ? fixtures::random_povm(2, 3, rng)
                                    : fixtures::random_povm(3, 4, rng);
    const Dilation dil = dilate(m);
    CHECK(dil.ancilla_dim == m.dim);
    CHECK(verify_dilation(m, dil, 20) <= 1e-9);
    const auto phi = fixtures::random_pure_state(m.dim, rng);
    const Dilation dil2 = dilate(m, phi);
    CHECK(verify_dilation(m, dil2, 20) <= 1e-9);
  }
}
