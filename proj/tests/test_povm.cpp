#include <cmath>
#include <random>

#include "doctest.h"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/povm.hpp"
#include "povmsim/protocols.hpp"

using namespace povmsim;

namespace {

double povm_distance(const Povm& a, const Povm& b) {
  REQUIRE(a.outcomes() == b.outcomes());
  double dev = 0.0;
  for (int i = 0; i < a.outcomes(); ++i) {
    ComplexMatrix d = a.effects[i].matrix();
    d -= b.effects[i].matrix();
    dev = std::max(dev, d.max_abs());
  }
  return dev;
}

Povm two_outcome(const HermitianOperator& e) {
  Povm p;
  p.dim = e.dim();
  p.effects = {e, HermitianOperator(ComplexMatrix::identity(e.dim()) - e.matrix())};
  return p;
}

}  // namespace

TEST_CASE("validate: basic verdicts") {
  Povm ok;
  ok.dim = 2;
  ok.effects = {HermitianOperator::identity(2), HermitianOperator::zero(2)};
  CHECK_NOTHROW(validate(ok));

  Povm bad = two_outcome(fixtures::pauli_z());
  try {
    validate(bad);
    FAIL("expected EffectNotPsd");
  } catch (const EffectNotPsd& e) {
    CHECK(e.index == 0);
    CHECK(e.min_eigenvalue == doctest::Approx(-1.0));
  }

  CHECK_NOTHROW(validate(fixtures::tetra()));

  Povm unnorm;
  unnorm.dim = 2;
  unnorm.effects = {HermitianOperator::identity(2), HermitianOperator::identity(2)};
  CHECK_THROWS_AS(validate(unnorm), NotNormalized);
}

TEST_CASE("depolarize: endpoints and spectra") {
  const Povm tetra = fixtures::tetra();
  CHECK(povm_distance(depolarize(tetra, 1.0), tetra) <= 1e-15);

  const Povm trivial = depolarize(tetra, 0.0);
  for (const auto& e : trivial.effects) {
    ComplexMatrix d = e.matrix();
    d -= Complex(0.25, 0.0) * ComplexMatrix::identity(2);
    CHECK(d.max_abs() <= 1e-15);
  }

  const Povm half = depolarize(tetra, 0.5);
  for (const auto& e : half.effects) {
    const auto eig = eig_hermitian(e);
    CHECK(eig.eigenvalues[0] == doctest::Approx((1.0 + 0.5) / 4.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx((1.0 - 0.5) / 4.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(depolarize(tetra, 1.5), InvalidArgument);
}

TEST_CASE("depolarize: semigroup law") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Povm m = fixtures::random_povm(2 + trial % 3, 3 + trial % 3, rng);
    const double s = 0.3 + 0.5 * (trial % 5) / 5.0;
    const double t = 0.2 + 0.7 * (trial % 7) / 7.0;
    CHECK(povm_distance(depolarize(depolarize(m, s), t), depolarize(m, s * t)) <= 1e-12);
  }
}

TEST_CASE("depolarize: Born-rule duality with depolarized states") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const Povm m = fixtures::random_povm(d, 4, rng);
    const auto rho = fixtures::random_density(d, rng);
    const double t = 0.37;
    const Povm mt = depolarize(m, t);
    ComplexMatrix rho_t = rho.matrix();
    rho_t *= Complex(t, 0.0);
    ComplexMatrix shift = ComplexMatrix::identity(d);
    shift *= Complex((1.0 - t) / d, 0.0);
    rho_t += shift;
    for (int i = 0; i < m.outcomes(); ++i) {
      const double lhs = (rho.matrix() * mt.effects[i].matrix()).trace().real();
      const double rhs = (rho_t * m.effects[i].matrix()).trace().real();
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("post_process: identity, coarse-graining, composition") {
  const Povm tetra = fixtures::tetra();
  CHECK(povm_distance(post_process(tetra, PostProcessing::identity(4)), tetra) <= 1e-15);

  PostProcessing all(4, 1);
  for (int j = 0; j < 4; ++j) all(j, 0) = 1.0;
  const Povm one = post_process(tetra, all);
  ComplexMatrix d = one.effects[0].matrix();
  d -= ComplexMatrix::identity(2);
  CHECK(d.max_abs() <= 1e-14);

  std::mt19937_64 rng(31);
  const Povm m = fixtures::random_povm(3, 4, rng);
  PostProcessing q1(4, 3), q2(3, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int j = 0; j < 4; ++j) {
    double total = 0.0;
    std::vector<double> row(3);
    for (auto& v : row) total += (v = u(rng));
    for (int i = 0; i < 3; ++i) q1(j, i) = row[i] / total;
  }
  for (int j = 0; j < 3; ++j) {
    const double a = u(rng);
    q2(j, 0) = a;
    q2(j, 1) = 1.0 - a;
  }
  CHECK(povm_distance(post_process(post_process(m, q1), q2), post_process(m, q1.then(q2))) <= 1e-12);
}

TEST_CASE("refine_rank_one then coarse-grain is the identity") {
  const auto [refined, coarse] = refine_rank_one(fixtures::tetra());
  CHECK(refined.outcomes() == 8);
  CHECK(povm_distance(post_process(refined, coarse), fixtures::tetra()) <= 1e-10);
  for (int i = 0; i < 4; ++i) {
    int nonzero = 0;
    for (int j = 0; j < 2; ++j)
      if (refined.effects[i * 2 + j].matrix().max_abs() > 1e-12) ++nonzero;
    CHECK(nonzero == 1);
  }

  Povm flat;
  flat.dim = 2;
  ComplexMatrix h = ComplexMatrix::identity(2);
  h *= Complex(0.5, 0.0);
  flat.effects = {HermitianOperator(h), HermitianOperator(h)};
  const auto [r2, c2] = refine_rank_one(flat);
  CHECK(r2.outcomes() == 4);
  int rank_one_pieces = 0;
  for (const auto& e : r2.effects)
    if (e.matrix().max_abs() > 1e-12) {
      CHECK(e.trace_real() == doctest::Approx(0.5));
      ++rank_one_pieces;
    }
  CHECK(rank_one_pieces == 4);
  CHECK(povm_distance(post_process(r2, c2), flat) <= 1e-10);

  const auto [r3, c3] = refine_rank_one(fixtures::modified_trine());
  int pieces_third = 0;
  for (int j = 0; j < 3; ++j)
    if (r3.effects[2 * 3 + j].matrix().max_abs() > 1e-12) ++pieces_third;
  CHECK(pieces_third == 2);
  CHECK(povm_distance(post_process(r3, c3), fixtures::modified_trine()) <= 1e-10);
}

TEST_CASE("refine/coarse identity on 500 random POVMs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 3;
    const int n = 2 + trial % 5;
    const Povm m = fixtures::random_povm(d, n, rng);
    const auto [refined, coarse] = refine_rank_one(m);
    CHECK(refined.outcomes() == n * d);
    CHECK(povm_distance(post_process(refined, coarse), m) <= 1e-10);
  }
}

TEST_CASE("is_projective") {
  Povm comp;
  comp.dim = 2;
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  comp.effects = {HermitianOperator(e0), HermitianOperator(e1)};
  CHECK(is_projective(comp, 1e-9));
  CHECK_FALSE(is_projective(fixtures::tetra(), 1e-9));

  Povm det;
  det.dim = 3;
  det.effects = {HermitianOperator::identity(3), HermitianOperator::zero(3), HermitianOperator::zero(3)};
  CHECK(is_projective(det, 1e-9));
}

TEST_CASE("sufficient_simulable") {
  Povm det;
  det.dim = 2;
  det.effects = {HermitianOperator::identity(2), HermitianOperator::zero(2)};
  CHECK(sufficient_simulable(det));

  CHECK_FALSE(sufficient_simulable(fixtures::tetra()));  // each sum is 3/2

  CHECK(sufficient_simulable(depolarize(fixtures::tetra(), 1.0 / 3.0)));  // sum exactly 1
}

TEST_CASE("mix") {
  const Povm tetra = fixtures::tetra();
  CHECK(povm_distance(mix({{1.0, tetra}}), tetra) <= 1e-15);

  Povm d1, d2;
  d1.dim = d2.dim = 2;
  d1.effects = {HermitianOperator::identity(2), HermitianOperator::zero(2)};
  d2.effects = {HermitianOperator::zero(2), HermitianOperator::identity(2)};
  const Povm m = mix({{0.5, d1}, {0.5, d2}});
  for (const auto& e : m.effects) CHECK(e.trace_real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(mix({{0.4, d1}, {0.4, d2}}), InvalidArgument);
}

TEST_CASE("protocol_tetra_optimal realises the sqrt(2/3)-depolarized tetra") {
  const SimulationStrategy s = protocol_tetra_optimal();
  CHECK(s.members.size() == 6);
  for (const auto& member : s.members) CHECK(is_projective(member, 1e-12));
  const Povm realized = apply(s);
  const Povm target = depolarize(fixtures::tetra(), std::sqrt(2.0 / 3.0));
  CHECK(povm_distance(realized, target) <= 1e-10);
}

TEST_CASE("protocol_inverse_d realises the 1/d depolarisation") {
  const Povm tetra = fixtures::tetra();
  const SimulationStrategy s = protocol_inverse_d(tetra);
  CHECK(povm_distance(apply(s), depolarize(tetra, 0.5)) <= 1e-10);

  ComplexMatrix seed(3, 3);
  seed(0, 0) = Complex(1.0 / 3.0, 0.0);
  const Povm cov = fixtures::covariant_qutrit(HermitianOperator(seed));
  const SimulationStrategy s3 = protocol_inverse_d(cov);
  CHECK(povm_distance(apply(s3), depolarize(cov, 1.0 / 3.0)) <= 1e-10);

  const SimulationStrategy su = protocol_inverse_d(tetra, MissReassignment::UniformOffDiagonal);
  CHECK(povm_distance(apply(su), depolarize(tetra, 2.0 / 3.0)) <= 1e-10);

  Povm flat;
  flat.dim = 2;
  ComplexMatrix h = ComplexMatrix::identity(2);
  h *= Complex(0.5, 0.0);
  flat.effects = {HermitianOperator(h), HermitianOperator(h)};
  CHECK_THROWS_AS(protocol_inverse_d(flat), EffectNotRankOne);
}

TEST_CASE("fixtures: validity and structure") {
  CHECK_NOTHROW(validate(fixtures::tetra()));
  CHECK_NOTHROW(validate(fixtures::trine()));
  CHECK_NOTHROW(validate(fixtures::modified_trine()));
  CHECK_NOTHROW(validate(fixtures::double_tetra()));
  CHECK_FALSE(is_projective(fixtures::modified_trine(), 1e-9));
  CHECK(fixtures::modified_trine().dim == 3);
  for (const auto& e : fixtures::double_tetra().effects)
    CHECK(e.trace_real() == doctest::Approx(1.0));

  ComplexMatrix idseed = ComplexMatrix::identity(3);
  idseed *= Complex(1.0 / 9.0, 0.0);
  const Povm trivial = fixtures::covariant_qutrit(HermitianOperator(idseed));
  CHECK_NOTHROW(validate(trivial));
  for (const auto& e : trivial.effects) {
    ComplexMatrix d = e.matrix();
    d -= idseed;
    CHECK(d.max_abs() <= 1e-12);
  }

  ComplexMatrix seed(3, 3);
  seed(0, 0) = Complex(1.0 / 3.0, 0.0);
  const Povm cov = fixtures::covariant_qutrit(HermitianOperator(seed));
  CHECK_NOTHROW(validate(cov));
  CHECK(cov.outcomes() == 9);
  for (const auto& e : cov.effects) {
    const auto eig = eig_hermitian(e);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(eig.eigenvalues[1]) <= 1e-12);
  }

  ComplexMatrix wrong = ComplexMatrix::identity(3);
  CHECK_THROWS_AS(fixtures::covariant_qutrit(HermitianOperator(wrong)), InvalidSeed);
}

TEST_CASE("random POVM generators produce valid POVMs") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    CHECK_NOTHROW(validate(fixtures::random_povm(2 + trial % 3, 2 + trial % 4, rng)));
    const Povm r1 = fixtures::random_rank_one_povm(2 + trial % 3, 4 + trial % 3, rng);
    CHECK_NOTHROW(validate(r1));
    for (const auto& e : r1.effects) {
      const auto eig = eig_hermitian(e);
      if (e.dim() > 1) CHECK(std::abs(eig.eigenvalues[1]) <= 1e-10);
    }
    const Povm t1 = fixtures::random_trace_one_qutrit(rng);
    CHECK_NOTHROW(validate(t1));
    for (const auto& e : t1.effects) CHECK(e.trace_real() == doctest::Approx(1.0).epsilon(1e-10));
  }
}
