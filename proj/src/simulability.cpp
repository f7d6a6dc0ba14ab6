#include "povmsim/simulability.hpp"

#include <algorithm>
#include <cmath>

#include "povmsim/decompose.hpp"
#include "povmsim/errors.hpp"

namespace povmsim {

namespace {

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

struct SubsetVars {
  std::vector<int> support;          // full subset, positional
  std::vector<int> alive;            // alive members of the subset
  std::vector<int> blocks;           // SDP block ids aligned with `alive`
  int p_scalar = -1;
  bool trace_aligned = false;
};

SolverDiagnostics diag_from(const sdp::SdpSolution& sol) {
  return {sol.status, sol.duality_gap, sol.primal_residual, sol.dual_residual, sol.iterations};
}

// Shared builder for the m-outcome and qutrit programs. The qutrit variant
// adds trace-aligned three-outcome parts on top of the two-outcome ones.
VisibilityResult solve_decomposition_program(int dim, const std::vector<HermitianOperator>& effects,
                                             const std::vector<int>& part_sizes,
                                             const std::vector<bool>& part_trace_aligned,
                                             const VisibilityOptions& vopts) {
  const int n = static_cast<int>(effects.size());
  const int d = dim;
  if (n < 1) throw InvalidArgument("measurement needs at least one outcome");
  for (const auto& e : effects)
    if (e.dim() != d) throw ShapeMismatch("effect dimension mismatch");

  std::vector<bool> alive(n);
  for (int i = 0; i < n; ++i) alive[i] = effects[i].matrix().max_abs() > 1e-13;

  sdp::SdpProblem prob;
  int t_scalar = -1;
  if (!vopts.fixed_visibility) {
    t_scalar = prob.add_scalar_block_bounded(1.0);
    prob.objective_scalar(t_scalar, 1.0);
  }

  std::vector<SubsetVars> subsets;
  int group = 0;
  for (size_t family = 0; family < part_sizes.size(); ++family) {
    const int msize = part_sizes[family];
    const bool traced = part_trace_aligned[family];
    if (msize > n) continue;
    for (const auto& combo : combinations(n, msize)) {
      SubsetVars sv;
      sv.support = combo;
      sv.trace_aligned = traced;
      for (int i : combo)
        if (alive[i]) sv.alive.push_back(i);
      if (sv.alive.empty()) continue;
      // Trace-aligned parts force every member's trace to equal the weight,
      // so a dead member would pin the whole part to zero: skip those.
      if (traced && static_cast<int>(sv.alive.size()) != msize) continue;
      for (size_t k = 0; k < sv.alive.size(); ++k) sv.blocks.push_back(prob.add_hermitian_block(d));
      sv.p_scalar = prob.add_scalar_block();

      // Normalisation: sum of the part's effects equals weight * identity.
      std::vector<std::pair<int, double>> bterms;
      for (int b : sv.blocks) bterms.emplace_back(b, 1.0);
      HermitianOperator minus_id = HermitianOperator::identity(d);
      minus_id *= -1.0;
      std::vector<std::pair<int, HermitianOperator>> sterms = {{sv.p_scalar, minus_id}};
      prob.add_matrix_equality(bterms, sterms, HermitianOperator::zero(d), group);

      if (traced) {
        // tr([N_Y]_i) = p_Y; the last one is implied by the normalisation
        // trace, so it is dropped to keep the rows independent.
        for (size_t k = 0; k + 1 < sv.blocks.size(); ++k) {
          const int eq = prob.add_equality(0.0, group);
          prob.equality_matrix_term(eq, sv.blocks[k], HermitianOperator::identity(d));
          prob.equality_scalar_term(eq, sv.p_scalar, -1.0);
        }
      }
      subsets.push_back(std::move(sv));
      ++group;
    }
  }
  if (subsets.empty()) throw InvalidArgument("no admissible sub-measurements");

  // Realised-measurement equalities (shared): for each alive outcome,
  //   sum_{X ∋ i} [N_X]_i - t (M_i - tr(M_i)/d I) = tr(M_i)/d I.
  // The probability-sum condition is implied by these and the per-part
  // normalisations, so it is not added.
  const HermitianOperator id = HermitianOperator::identity(d);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    std::vector<std::pair<int, double>> bterms;
    for (const auto& sv : subsets)
      for (size_t k = 0; k < sv.alive.size(); ++k)
        if (sv.alive[k] == i) bterms.emplace_back(sv.blocks[k], 1.0);
    const double tr_over_d = effects[i].trace_real() / d;
    HermitianOperator trivial = id;
    trivial *= tr_over_d;
    if (vopts.fixed_visibility) {
      const double t = *vopts.fixed_visibility;
      HermitianOperator rhs = effects[i];
      rhs *= t;
      HermitianOperator shift = trivial;
      shift *= (1.0 - t);
      rhs += shift;
      prob.add_matrix_equality(bterms, {}, rhs);
    } else {
      HermitianOperator tcoeff = effects[i];
      tcoeff -= trivial;
      tcoeff *= -1.0;
      std::vector<std::pair<int, HermitianOperator>> sterms = {{t_scalar, tcoeff}};
      prob.add_matrix_equality(bterms, sterms, trivial);
    }
  }

  const auto sol = prob.solve(vopts.solver);
  if (sol.status != sdp::SolveStatus::Optimal)
    throw SolverFailure("visibility program did not reach optimality: " + sol.message);

  VisibilityResult out;
  out.dim = d;
  out.outcomes = n;
  out.t_star = vopts.fixed_visibility ? *vopts.fixed_visibility : sol.scalar_blocks[t_scalar];
  out.diagnostics = diag_from(sol);
  for (const auto& sv : subsets) {
    SubMeasurement part;
    part.support = sv.support;
    part.weight = sol.scalar_blocks[sv.p_scalar];
    part.trace_aligned = sv.trace_aligned;
    for (int i : sv.support) {
      const auto it = std::find(sv.alive.begin(), sv.alive.end(), i);
      if (it == sv.alive.end()) {
        part.effects.push_back(HermitianOperator::zero(d));
      } else {
        part.effects.push_back(sol.hermitian_blocks[sv.blocks[it - sv.alive.begin()]]);
      }
    }
    out.parts.push_back(std::move(part));
  }

  if (vopts.check_certificate) {
    // Reconstruction: the parts must sum to the depolarised measurement.
    // The achievable residual scales with the solver's feasibility target.
    const double cert_tol = std::max(1e-7, 10.0 * vopts.solver.feas_tol);
    double weight_sum = 0.0;
    std::vector<ComplexMatrix> sums(n, ComplexMatrix::zero(d, d));
    for (const auto& part : out.parts) {
      weight_sum += part.weight;
      for (size_t k = 0; k < part.support.size(); ++k) sums[part.support[k]] += part.effects[k].matrix();
    }
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
      ComplexMatrix target = effects[i].matrix();
      target *= Complex(out.t_star, 0.0);
      ComplexMatrix shift = ComplexMatrix::identity(d);
      shift *= Complex((1.0 - out.t_star) * effects[i].trace_real() / d, 0.0);
      target += shift;
      target -= sums[i];
      dev = std::max(dev, target.max_abs());
    }
    if (dev > cert_tol)
      throw CertificateInconsistent("certificate reconstruction deviates by " + std::to_string(dev));
    if (std::abs(weight_sum - 1.0) > cert_tol)
      throw CertificateInconsistent("certificate weights sum to " + std::to_string(weight_sum));
  }
  return out;
}

std::vector<HermitianOperator> effects_of(const Povm& m) { return m.effects; }

}  // namespace

VisibilityResult visibility_m_outcome(const Povm& m, int m_outcomes, const VisibilityOptions& vopts) {
  if (m_outcomes < 1 || m_outcomes > m.outcomes())
    throw InvalidArgument("m must lie between 1 and the outcome count");
  return solve_decomposition_program(m.dim, effects_of(m), {m_outcomes}, {false}, vopts);
}

VisibilityResult visibility_m_outcome(int dim, const std::vector<HermitianOperator>& effects,
                                      int m_outcomes, const VisibilityOptions& vopts) {
  if (m_outcomes < 1 || m_outcomes > static_cast<int>(effects.size()))
    throw InvalidArgument("m must lie between 1 and the outcome count");
  return solve_decomposition_program(dim, effects, {m_outcomes}, {false}, vopts);
}

VisibilityResult visibility_qutrit_projective(const Povm& m, const VisibilityOptions& vopts) {
  if (m.dim != 3) throw InvalidArgument("the projective-simulability program requires dimension 3");
  return visibility_qutrit_projective(m.effects, vopts);
}

VisibilityResult visibility_qutrit_projective(const std::vector<HermitianOperator>& effects,
                                              const VisibilityOptions& vopts) {
  for (const auto& e : effects)
    if (e.dim() != 3) throw InvalidArgument("the projective-simulability program requires dimension 3");
  const int n = static_cast<int>(effects.size());
  if (n < 3) {
    // With fewer than three outcomes only the two-outcome family exists.
    return solve_decomposition_program(3, effects, {std::min(2, n)}, {false}, vopts);
  }
  return solve_decomposition_program(3, effects, {2, 3}, {false, true}, vopts);
}

SimulabilityCheck check_m_simulable(const Povm& m, int m_outcomes, const VisibilityOptions& vopts) {
  SimulabilityCheck out;
  out.visibility = visibility_m_outcome(m, m_outcomes, vopts);
  out.simulable = out.visibility.t_star >= 1.0 - 1e-6;
  return out;
}

namespace {

ComplexMatrix top_k_projector(const EigenDecomposition& eig, int k) {
  const int d = eig.eigenvectors.rows();
  ComplexMatrix p(d, d);
  for (int j = 0; j < k; ++j)
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) p(r, c) += eig.eigenvectors(r, j) * std::conj(eig.eigenvectors(c, j));
  return p;
}

}  // namespace

SimulationStrategy strategy_from_certificate(const Povm& m, const VisibilityResult& cert) {
  const int d = m.dim;
  const int n = m.outcomes();
  if (cert.dim != d || cert.outcomes != n)
    throw CertificateInconsistent("certificate shape does not match the measurement");
  const Povm target = depolarize(m, cert.t_star);

  SimulationStrategy strategy;
  if (is_projective(target, 1e-9)) {
    strategy.weights = {1.0};
    strategy.members = {target};
    return strategy;
  }

  const double part_floor = 1e-9;
  for (const auto& part : cert.parts) {
    if (part.weight <= part_floor) continue;
    if (part.trace_aligned) {
      if (part.support.size() != 3 || d != 3)
        throw CertificateInconsistent("trace-aligned parts are qutrit three-outcome objects");
      Povm sub;
      sub.dim = 3;
      for (const auto& e : part.effects) {
        ComplexMatrix scaled = e.matrix();
        scaled *= Complex(1.0 / part.weight, 0.0);
        // Absorb the solver's feasibility slack: clip to the cone, then
        // restore the exact unit trace the decomposition requires.
        HermitianOperator h = psd_clip(HermitianOperator(std::move(scaled)));
        const double shift = (1.0 - h.trace_real()) / 3.0;
        ComplexMatrix fixed = h.matrix();
        ComplexMatrix eye = ComplexMatrix::identity(3);
        eye *= Complex(shift, 0.0);
        fixed += eye;
        sub.effects.emplace_back(std::move(fixed));
      }
      try {
        for (const auto& [w, member] : decompose_trace_one_qutrit(sub)) {
          Povm embedded;
          embedded.dim = d;
          embedded.effects.assign(n, HermitianOperator::zero(d));
          for (size_t k = 0; k < part.support.size(); ++k)
            embedded.effects[part.support[k]] = member.effects[k];
          strategy.members.push_back(std::move(embedded));
          strategy.weights.push_back(part.weight * w);
        }
      } catch (const Error&) {
        // A part this small is dominated by solver slack and cannot be
        // decomposed faithfully; dropping it is covered by the final
        // soundness check below.
        if (part.weight > 1e-6) throw;
      }
      continue;
    }
    if (part.support.size() != 2)
      throw CertificateInconsistent("only dichotomic and trace-aligned parts can be expanded");
    const int i = part.support[0];
    const int j = part.support[1];
    ComplexMatrix escaled = part.effects[0].matrix();
    escaled *= Complex(1.0 / part.weight, 0.0);
    auto eig = eig_hermitian(HermitianOperator(std::move(escaled)));
    for (auto& lam : eig.eigenvalues) lam = std::clamp(lam, 0.0, 1.0);
    // (E, I-E) = sum_k (lam_k - lam_{k+1}) (Q_k, I-Q_k) + (1-lam_1) (0, I).
    // Slivers at the solver-noise scale are dropped; the inactive primal
    // eigenvalues sit near the final barrier parameter, well below this.
    for (int k = 1; k <= d; ++k) {
      const double span = eig.eigenvalues[k - 1] - (k < d ? eig.eigenvalues[k] : 0.0);
      if (span * part.weight <= 1e-8) continue;
      const ComplexMatrix q = top_k_projector(eig, k);
      Povm member;
      member.dim = d;
      member.effects.assign(n, HermitianOperator::zero(d));
      member.effects[i] = HermitianOperator(q);
      member.effects[j] = HermitianOperator(ComplexMatrix::identity(d) - q);
      strategy.members.push_back(std::move(member));
      strategy.weights.push_back(part.weight * span);
    }
    const double residual = 1.0 - eig.eigenvalues[0];
    if (residual * part.weight > 1e-8) {
      Povm member;
      member.dim = d;
      member.effects.assign(n, HermitianOperator::zero(d));
      member.effects[j] = HermitianOperator::identity(d);
      strategy.members.push_back(std::move(member));
      strategy.weights.push_back(part.weight * residual);
    }
  }

  double total = 0.0;
  for (double w : strategy.weights) total += w;
  if (total <= 0.0) throw CertificateInconsistent("certificate carries no usable weight");
  for (double& w : strategy.weights) w /= total;

  // Soundness: the strategy must realise the depolarised measurement.
  const Povm realized = apply(strategy);
  double dev = 0.0;
  for (int k = 0; k < n; ++k) {
    ComplexMatrix diff = realized.effects[k].matrix();
    diff -= target.effects[k].matrix();
    dev = std::max(dev, diff.max_abs());
  }
  if (dev > 1e-6)
    throw CertificateInconsistent("extracted strategy deviates from the target by " +
                                  std::to_string(dev));
  return strategy;
}

}  // namespace povmsim
