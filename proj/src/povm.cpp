#include "povmsim/povm.hpp"

#include <cmath>

#include "povmsim/errors.hpp"

namespace povmsim {

PostProcessing PostProcessing::identity(int n) {
  PostProcessing q(n, n);
  for (int j = 0; j < n; ++j) q(j, j) = 1.0;
  return q;
}

void PostProcessing::validate(double tol) const {
  for (int j = 0; j < inputs_; ++j) {
    double row = 0.0;
    for (int i = 0; i < outputs_; ++i) {
      const double v = (*this)(j, i);
      if (v < -tol || v > 1.0 + tol)
        throw InvalidArgument("post-processing entry outside [0,1]");
      row += v;
    }
    if (std::abs(row - 1.0) > tol)
      throw InvalidArgument("post-processing row " + std::to_string(j) + " sums to " + std::to_string(row));
  }
}

PostProcessing PostProcessing::then(const PostProcessing& next) const {
  if (outputs_ != next.inputs_) throw ShapeMismatch("post-processing composition shape mismatch");
  PostProcessing out(inputs_, next.outputs_);
  for (int k = 0; k < inputs_; ++k)
    for (int i = 0; i < next.outputs_; ++i) {
      double v = 0.0;
      for (int j = 0; j < outputs_; ++j) v += (*this)(k, j) * next(j, i);
      out(k, i) = v;
    }
  return out;
}

Povm validate(const Povm& m, const Tolerances& tol) {
  if (m.effects.empty()) throw InvalidArgument("POVM has no effects");
  ComplexMatrix sum = ComplexMatrix::zero(m.dim, m.dim);
  for (int i = 0; i < m.outcomes(); ++i) {
    const auto& e = m.effects[i];
    if (e.dim() != m.dim) throw ShapeMismatch("effect dimension mismatch");
    const double lam = min_eigenvalue(e);
    if (lam < -tol.psd)
      throw EffectNotPsd(i, lam,
                         "effect " + std::to_string(i) + " has eigenvalue " + std::to_string(lam));
    sum += e.matrix();
  }
  sum -= ComplexMatrix::identity(m.dim);
  if (sum.max_abs() > tol.povm_normalization)
    throw NotNormalized("sum of effects deviates from identity by " + std::to_string(sum.max_abs()));
  return m;
}

bool is_valid(const Povm& m, const Tolerances& tol) {
  try {
    validate(m, tol);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Povm depolarize(const Povm& m, double t) {
  if (t < 0.0 || t > 1.0) throw InvalidArgument("visibility t must lie in [0,1]");
  Povm out;
  out.dim = m.dim;
  out.effects.reserve(m.effects.size());
  const ComplexMatrix id = ComplexMatrix::identity(m.dim);
  for (const auto& e : m.effects) {
    ComplexMatrix z = e.matrix();
    z *= Complex(t, 0.0);
    ComplexMatrix shift = id;
    shift *= Complex((1.0 - t) * e.trace_real() / m.dim, 0.0);
    z += shift;
    out.effects.emplace_back(std::move(z));
  }
  return out;
}

Povm post_process(const Povm& m, const PostProcessing& q) {
  if (q.inputs() != m.outcomes()) throw ShapeMismatch("post-processing expects a different outcome count");
  Povm out;
  out.dim = m.dim;
  out.effects.reserve(q.outputs());
  for (int i = 0; i < q.outputs(); ++i) {
    ComplexMatrix e = ComplexMatrix::zero(m.dim, m.dim);
    for (int j = 0; j < m.outcomes(); ++j) {
      if (q(j, i) == 0.0) continue;
      ComplexMatrix term = m.effects[j].matrix();
      term *= Complex(q(j, i), 0.0);
      e += term;
    }
    out.effects.emplace_back(std::move(e));
  }
  return out;
}

Povm mix(const std::vector<std::pair<double, Povm>>& weighted) {
  if (weighted.empty()) throw InvalidArgument("empty mixture");
  double total = 0.0;
  const int dim = weighted.front().second.dim;
  const int n = weighted.front().second.outcomes();
  for (const auto& [w, p] : weighted) {
    if (w < -1e-12) throw InvalidArgument("negative mixture weight");
    if (p.dim != dim || p.outcomes() != n) throw ShapeMismatch("mixture members must share shape");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument("mixture weights sum to " + std::to_string(total));
  Povm out;
  out.dim = dim;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix e = ComplexMatrix::zero(dim, dim);
    for (const auto& [w, p] : weighted) {
      ComplexMatrix term = p.effects[i].matrix();
      term *= Complex(w, 0.0);
      e += term;
    }
    out.effects.emplace_back(std::move(e));
  }
  return out;
}

std::pair<Povm, PostProcessing> refine_rank_one(const Povm& m) {
  const int d = m.dim;
  const int n = m.outcomes();
  Povm refined;
  refined.dim = d;
  refined.effects.reserve(n * d);
  for (int i = 0; i < n; ++i) {
    const auto eig = eig_hermitian(m.effects[i]);
    const double cutoff = 1e-12 * std::max(1.0, std::abs(eig.eigenvalues.front()));
    for (int j = 0; j < d; ++j) {
      const double lam = eig.eigenvalues[j];
      if (lam <= cutoff) {
        refined.effects.push_back(HermitianOperator::zero(d));
        continue;
      }
      ComplexMatrix e(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          e(r, c) = lam * eig.eigenvectors(r, j) * std::conj(eig.eigenvectors(c, j));
      refined.effects.emplace_back(std::move(e));
    }
  }
  PostProcessing coarse(n * d, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) coarse(i * d + j, i) = 1.0;
  return {std::move(refined), std::move(coarse)};
}

bool is_projective(const Povm& m, double tol) {
  for (const auto& e : m.effects) {
    ComplexMatrix sq = e.matrix() * e.matrix();
    sq -= e.matrix();
    if (sq.max_abs() > tol) return false;
  }
  return true;
}

bool sufficient_simulable(const Povm& m) {
  const int n = m.outcomes();
  std::vector<double> lam_max(n);
  for (int i = 0; i < n; ++i) lam_max[i] = std::max(0.0, max_eigenvalue(m.effects[i]));
  double total = 0.0;
  for (double v : lam_max) total += v;
  for (int k = 0; k < n; ++k)
    if (total - lam_max[k] <= 1.0 + 1e-9) return true;
  return false;
}

Povm apply(const SimulationStrategy& s) {
  if (s.weights.size() != s.members.size()) throw ShapeMismatch("strategy weights/members mismatch");
  std::vector<std::pair<double, Povm>> weighted;
  weighted.reserve(s.members.size());
  for (size_t k = 0; k < s.members.size(); ++k) weighted.emplace_back(s.weights[k], s.members[k]);
  Povm realized = mix(weighted);
  if (s.post) realized = post_process(realized, *s.post);
  return realized;
}

}  // namespace povmsim
