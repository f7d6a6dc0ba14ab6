#include <cmath>
#include <random>

#include "doctest.h"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/simulability.hpp"
#include "support/oracles.hpp"

using namespace povmsim;

namespace {

double povm_distance(const Povm& a, const Povm& b) {
  double dev = 0.0;
  for (int i = 0; i < a.outcomes(); ++i) {
    ComplexMatrix d = a.effects[i].matrix();
    d -= b.effects[i].matrix();
    dev = std::max(dev, d.max_abs());
  }
  return dev;
}

Povm conjugated(const Povm& m, const ComplexMatrix& u) {
  Povm out;
  out.dim = m.dim;
  for (const auto& e : m.effects) out.effects.emplace_back(u * e.matrix() * u.adjoint());
  return out;
}

}  // namespace

TEST_CASE("tetra visibility is sqrt(2/3)") {
  const auto res = visibility_m_outcome(fixtures::tetra(), 2);
  CHECK(res.t_star == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(2e-5));
  CHECK(res.diagnostics.status == sdp::SolveStatus::Optimal);
}

TEST_CASE("projective qubit measurements have visibility one") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    Povm p = fixtures::random_projective(2, rng);
    p.effects.push_back(HermitianOperator::zero(2));
    p.effects.push_back(HermitianOperator::zero(2));
    const auto res = visibility_m_outcome(p, 2);
    CHECK(res.t_star >= 1.0 - 1e-6);
  }
}

TEST_CASE("trine visibility matches the grid oracle") {
  const double oracle = oracles::trine_visibility_grid_oracle();
  CHECK(oracle == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-4));
  const auto res = visibility_m_outcome(fixtures::trine(), 2);
  CHECK(std::abs(res.t_star - oracle) <= 1e-4);
}

TEST_CASE("check_m_simulable") {
  Povm flat;
  flat.dim = 2;
  ComplexMatrix h = ComplexMatrix::identity(2);
  h *= Complex(0.5, 0.0);
  flat.effects = {HermitianOperator(h), HermitianOperator(h)};
  CHECK(check_m_simulable(flat, 2).simulable);

  CHECK_FALSE(check_m_simulable(fixtures::tetra(), 2).simulable);

  const auto depol = check_m_simulable(depolarize(fixtures::tetra(), 0.8), 2);
  CHECK(depol.simulable);
  CHECK(depol.visibility.t_star >= 1.0 - 1e-6);
}

TEST_CASE("strategy extraction: tetra certificate uses at most six projective members") {
  const Povm tetra = fixtures::tetra();
  const auto cert = visibility_m_outcome(tetra, 2);
  const auto strategy = strategy_from_certificate(tetra, cert);
  CHECK(strategy.members.size() <= 6);
  for (const auto& member : strategy.members) CHECK(is_projective(member, 1e-6));
  CHECK(povm_distance(apply(strategy), depolarize(tetra, cert.t_star)) <= 1e-6);
}

TEST_CASE("strategy extraction: spectral thresholding identity") {
  ComplexMatrix e(2, 2);
  e(0, 0) = 0.7;
  e(1, 1) = 0.3;
  Povm m;
  m.dim = 2;
  m.effects = {HermitianOperator(e), HermitianOperator(ComplexMatrix::identity(2) - e)};
  VisibilityResult cert;
  cert.t_star = 1.0;
  cert.dim = 2;
  cert.outcomes = 2;
  SubMeasurement part;
  part.support = {0, 1};
  part.effects = {m.effects[0], m.effects[1]};
  part.weight = 1.0;
  cert.parts = {part};
  const auto strategy = strategy_from_certificate(m, cert);
  REQUIRE(strategy.members.size() == 3);
  std::vector<double> w = strategy.weights;
  std::sort(w.begin(), w.end());
  CHECK(w[0] == doctest::Approx(0.3));
  CHECK(w[1] == doctest::Approx(0.3));
  CHECK(w[2] == doctest::Approx(0.4));
  CHECK(povm_distance(apply(strategy), m) <= 1e-10);
}

TEST_CASE("strategy extraction: projective input collapses to one member") {
  std::mt19937_64 rng(111);
  const Povm p = fixtures::random_projective(2, rng);
  const auto cert = visibility_m_outcome(p, 2);
  REQUIRE(cert.t_star >= 1.0 - 1e-6);
  VisibilityResult rounded = cert;
  rounded.t_star = 1.0;
  const auto strategy = strategy_from_certificate(p, rounded);
  CHECK(strategy.members.size() == 1);
  CHECK(strategy.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("qutrit program: projective and trace-one inputs have visibility one") {
  std::mt19937_64 rng(121);
  const auto proj = visibility_qutrit_projective(fixtures::random_projective(3, rng));
  CHECK(proj.t_star >= 1.0 - 1e-5);

  for (int trial = 0; trial < 5; ++trial) {
    const Povm m = fixtures::random_trace_one_qutrit(rng);
    const auto res = visibility_qutrit_projective(m);
    CHECK(res.t_star >= 1.0 - 1e-5);
  }
}

TEST_CASE("qutrit program: the modified trine is strictly non-simulable") {
  const auto res = visibility_qutrit_projective(fixtures::modified_trine());
  CHECK(res.t_star < 1.0 - 1e-3);
  CHECK(res.t_star > 1.0 / 3.0 - 1e-6);  // never below the universal 1/d bound
}

TEST_CASE("qutrit strategy extraction reproduces the depolarised modified trine") {
  const Povm m = fixtures::modified_trine();
  VisibilityOptions opts;
  opts.solver.gap_tol = 1e-9;
  const auto cert = visibility_qutrit_projective(m, opts);
  const auto strategy = strategy_from_certificate(m, cert);
  for (const auto& member : strategy.members) CHECK(is_projective(member, 1e-6));
  CHECK(povm_distance(apply(strategy), depolarize(m, cert.t_star)) <= 1e-6);
}

TEST_CASE("visibility with the value pinned reproduces the maximising program") {
  const Povm tetra = fixtures::tetra();
  VisibilityOptions opts;
  opts.fixed_visibility = 0.7;  // below sqrt(2/3): feasible
  const auto res = visibility_m_outcome(tetra, 2, opts);
  CHECK(res.t_star == doctest::Approx(0.7));

  VisibilityOptions bad;
  bad.fixed_visibility = 0.9;  // above sqrt(2/3): infeasible
  CHECK_THROWS_AS(visibility_m_outcome(fixtures::tetra(), 2, bad), SolverFailure);
}

TEST_CASE("property: visibility is monotone under post-processing") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const Povm m = fixtures::random_povm(2, 4, rng);
    PostProcessing q(4, 3);
    for (int j = 0; j < 4; ++j) {
      double total = 0.0;
      std::vector<double> row(3);
      for (auto& v : row) total += (v = u(rng) + 0.05);
      for (int i = 0; i < 3; ++i) q(j, i) = row[i] / total;
    }
    const double t_m = visibility_m_outcome(m, 2).t_star;
    const double t_q = visibility_m_outcome(post_process(m, q), 2).t_star;
    CHECK(t_q >= t_m - 1e-6);
  }
}

TEST_CASE("property: scaling law t(Phi_s(M)) = min(1, t(M)/s)") {
  std::mt19937_64 rng(141);
  for (int trial = 0; trial < 4; ++trial) {
    const Povm m = fixtures::random_povm(2, 4, rng);
    const double tm = visibility_m_outcome(m, 2).t_star;
    for (double s : {0.5, 0.9}) {
      const double ts = visibility_m_outcome(depolarize(m, s), 2).t_star;
      CHECK(std::abs(ts - std::min(1.0, tm / s)) <= 1e-5);
    }
  }
}

TEST_CASE("property: concavity spot-check") {
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 4; ++trial) {
    const Povm a = fixtures::random_povm(2, 4, rng);
    const Povm b = fixtures::random_povm(2, 4, rng);
    const double ta = visibility_m_outcome(a, 2).t_star;
    const double tb = visibility_m_outcome(b, 2).t_star;
    const double tmix = visibility_m_outcome(mix({{0.5, a}, {0.5, b}}), 2).t_star;
    CHECK(tmix >= 0.5 * ta + 0.5 * tb - 1e-5);
  }
}

TEST_CASE("property: unitary invariance") {
  std::mt19937_64 rng(161);
  for (int trial = 0; trial < 3; ++trial) {
    const Povm m = fixtures::random_povm(2, 4, rng);
    const ComplexMatrix u = fixtures::random_unitary(2, rng);
    const double t1 = visibility_m_outcome(m, 2).t_star;
    const double t2 = visibility_m_outcome(conjugated(m, u), 2).t_star;
    CHECK(std::abs(t1 - t2) <= 1e-5);
  }
}

TEST_CASE("feasible-by-construction programs never report infeasibility") {
  std::mt19937_64 rng(171);
  for (int trial = 0; trial < 5; ++trial) {
    const Povm p = fixtures::random_projective(2, rng);
    const auto res = visibility_m_outcome(p, 2);
    CHECK(res.diagnostics.status == sdp::SolveStatus::Optimal);
  }
}

TEST_CASE("quasi-measurement overload accepts non-PSD inputs") {
  ComplexMatrix e1(2, 2);
  e1(0, 0) = 0.8;
  e1(1, 1) = -0.1;
  e1(0, 1) = e1(1, 0) = 0.05;
  std::vector<HermitianOperator> effects;
  effects.emplace_back(e1);
  effects.emplace_back(ComplexMatrix::identity(2) - e1);
  effects.emplace_back(ComplexMatrix::zero(2, 2));
  effects.emplace_back(ComplexMatrix::zero(2, 2));
  const auto res = visibility_m_outcome(2, effects, 2);
  CHECK(res.t_star > 0.0);
  CHECK(res.t_star < 1.0);
}
