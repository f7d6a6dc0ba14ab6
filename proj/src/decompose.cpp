#include "povmsim/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "povmsim/errors.hpp"

namespace povmsim {

namespace {

ComplexMatrix projector_from(const std::vector<Complex>& v) { return outer(v, v); }

std::vector<Complex> column(const ComplexMatrix& m, int c) {
  std::vector<Complex> v(m.rows());
  for (int r = 0; r < m.rows(); ++r) v[r] = m(r, c);
  return v;
}

// Real coordinates of a Hermitian operator: diagonal, then (re, im) of the
// upper triangle.
std::vector<double> herm_coords(const ComplexMatrix& h) {
  const int d = h.rows();
  std::vector<double> out;
  out.reserve(d * d);
  for (int p = 0; p < d; ++p) out.push_back(h(p, p).real());
  for (int p = 0; p < d; ++p)
    for (int q = p + 1; q < d; ++q) {
      out.push_back(h(p, q).real());
      out.push_back(h(p, q).imag());
    }
  return out;
}

// Local Hermitian basis on the support spanned by the columns of B
// (trace-preserving variant restricts to traceless operators), embedded back
// into the full space and normalised to unit Hilbert-Schmidt norm.
std::vector<ComplexMatrix> support_operator_basis(const ComplexMatrix& basis, bool traceless) {
  const int r = basis.cols();
  std::vector<ComplexMatrix> ops;
  auto embed = [&](const ComplexMatrix& local) {
    ComplexMatrix full = basis * local * basis.adjoint();
    const double norm = full.frobenius();
    if (norm > 0.0) full *= Complex(1.0 / norm, 0.0);
    return full;
  };
  if (traceless) {
    for (int k = 0; k + 1 < r; ++k) {
      ComplexMatrix l(r, r);
      l(k, k) = 1.0;
      l(k + 1, k + 1) = -1.0;
      ops.push_back(embed(l));
    }
  } else {
    for (int k = 0; k < r; ++k) {
      ComplexMatrix l(r, r);
      l(k, k) = 1.0;
      ops.push_back(embed(l));
    }
  }
  for (int k = 0; k < r; ++k)
    for (int l = k + 1; l < r; ++l) {
      ComplexMatrix re(r, r), im(r, r);
      re(k, l) = re(l, k) = 1.0;
      im(k, l) = Complex(0.0, 1.0);
      im(l, k) = Complex(0.0, -1.0);
      ops.push_back(embed(re));
      ops.push_back(embed(im));
    }
  return ops;
}

}  // namespace

std::vector<int> rank_vector(const Povm& m, double relative_cutoff) {
  std::vector<int> r;
  r.reserve(m.effects.size());
  for (const auto& e : m.effects) {
    // Effects at or below this magnitude (the natural scale of a POVM is
    // one) are boundary-step residue and count as zero.
    if (e.matrix().max_abs() <= 1e-11) {
      r.push_back(0);
      continue;
    }
    r.push_back(numerical_rank(e, relative_cutoff));
  }
  return r;
}

std::optional<Perturbation> find_perturbation(const Povm& m, bool trace_preserving,
                                              const Tolerances& tol) {
  const int n = m.outcomes();
  std::vector<ComplexMatrix> ops;
  std::vector<int> owner;
  for (int i = 0; i < n; ++i) {
    if (m.effects[i].matrix().max_abs() <= 1e-11) continue;  // zero effect has no support
    const ComplexMatrix basis = support_basis(m.effects[i], tol.rank_cutoff);
    for (auto& op : support_operator_basis(basis, trace_preserving)) {
      ops.push_back(std::move(op));
      owner.push_back(i);
    }
  }
  const int total = static_cast<int>(ops.size());
  if (total == 0) return std::nullopt;

  // Null space of (a_1,...,a_D) -> sum_k a_k Op_k via the Gram matrix of the
  // stacked coordinate columns.
  std::vector<std::vector<double>> cols(total);
  for (int k = 0; k < total; ++k) cols[k] = herm_coords(ops[k]);
  ComplexMatrix gram(total, total);
  for (int a = 0; a < total; ++a)
    for (int b = a; b < total; ++b) {
      double s = 0.0;
      for (size_t t = 0; t < cols[a].size(); ++t) s += cols[a][t] * cols[b][t];
      gram(a, b) = Complex(s, 0.0);
      gram(b, a) = Complex(s, 0.0);
    }
  const auto eig = eig_hermitian(HermitianOperator(gram));
  const double top = std::max(1.0, eig.eigenvalues.front());
  if (eig.eigenvalues.back() > 1e-10 * top) return std::nullopt;

  Perturbation out;
  out.operators.reserve(n);
  std::vector<ComplexMatrix> acc(n, ComplexMatrix::zero(m.dim, m.dim));
  for (int k = 0; k < total; ++k) {
    const double coeff = eig.eigenvectors(k, total - 1).real();
    if (std::abs(coeff) < 1e-15) continue;
    ComplexMatrix term = ops[k];
    term *= Complex(coeff, 0.0);
    acc[owner[k]] += term;
  }
  double norm = 0.0;
  for (const auto& a : acc) norm += a.frobenius() * a.frobenius();
  norm = std::sqrt(norm);
  if (norm <= 1e-12) return std::nullopt;
  ComplexMatrix sum = ComplexMatrix::zero(m.dim, m.dim);
  for (int i = 0; i < n; ++i) {
    acc[i] *= Complex(1.0 / norm, 0.0);
    sum += acc[i];
    out.operators.emplace_back(acc[i]);
  }
  if (sum.max_abs() > 1e-10)
    throw SolverFailure("perturbation null vector violates the zero-sum constraint");
  return out;
}

double boundary_step(const Povm& m, const std::vector<HermitianOperator>& x, const Tolerances& tol) {
  double t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.outcomes(); ++i) {
    if (x[i].matrix().max_abs() <= 1e-14) continue;
    const ComplexMatrix basis = support_basis(m.effects[i], tol.rank_cutoff);
    const int r = basis.cols();
    if (r == 0) continue;
    const HermitianOperator a(basis.adjoint() * m.effects[i].matrix() * basis);
    const HermitianOperator xr(basis.adjoint() * x[i].matrix() * basis);
    const HermitianOperator ai = inverse_sqrt_psd(a);
    const HermitianOperator w(ai.matrix() * xr.matrix() * ai.matrix());
    const double lam = min_eigenvalue(w);
    if (lam < -1e-14) t = std::min(t, -1.0 / lam);
  }
  return t;
}

namespace {

int total_rank(const Povm& m, const Tolerances& tol) {
  const auto rv = rank_vector(m, tol.rank_cutoff);
  return std::accumulate(rv.begin(), rv.end(), 0);
}

Povm step_along(const Povm& m, double t, const std::vector<HermitianOperator>& dir) {
  Povm child;
  child.dim = m.dim;
  for (int i = 0; i < m.outcomes(); ++i) {
    ComplexMatrix e = m.effects[i].matrix();
    ComplexMatrix step = dir[i].matrix();
    step *= Complex(t, 0.0);
    e += step;
    // A boundary step that lands on the cone boundary leaves residue at the
    // rounding scale; snap it so downstream rank logic sees an exact zero.
    if (e.max_abs() <= 1e-11) e = ComplexMatrix::zero(m.dim, m.dim);
    child.effects.emplace_back(std::move(e));
  }
  return child;
}

std::vector<HermitianOperator> negated(const std::vector<HermitianOperator>& x) {
  std::vector<HermitianOperator> neg;
  neg.reserve(x.size());
  for (const auto& op : x) {
    HermitianOperator h = op;
    h *= -1.0;
    neg.push_back(std::move(h));
  }
  return neg;
}

void decompose_extremal_rec(const Povm& m, double weight, int depth,
                            std::vector<std::pair<double, Povm>>& out, const Tolerances& tol) {
  if (depth < 0) throw DepthExceeded("extremal decomposition recursion exceeded the rank budget");
  const auto pert = find_perturbation(m, false, tol);
  if (!pert) {
    out.emplace_back(weight, m);
    return;
  }
  const auto neg = negated(pert->operators);
  const double t_plus = boundary_step(m, pert->operators, tol);
  const double t_minus = boundary_step(m, neg, tol);
  if (!std::isfinite(t_plus) || !std::isfinite(t_minus) || t_plus <= 0.0 || t_minus <= 0.0)
    throw SolverFailure("perturbation direction did not reach the boundary");
  const int parent_rank = total_rank(m, tol);
  const Povm plus = step_along(m, t_plus, pert->operators);
  const Povm minus = step_along(m, t_minus, neg);
  for (const Povm* child : {&plus, &minus})
    if (total_rank(*child, tol) >= parent_rank)
      throw DepthExceeded("boundary step failed to reduce the total rank");
  const double total = t_plus + t_minus;
  decompose_extremal_rec(plus, weight * (t_minus / total), depth - 1, out, tol);
  decompose_extremal_rec(minus, weight * (t_plus / total), depth - 1, out, tol);
}

}  // namespace

std::vector<std::pair<double, Povm>> decompose_extremal(const Povm& m, const Tolerances& tol) {
  std::vector<std::pair<double, Povm>> out;
  decompose_extremal_rec(m, 1.0, total_rank(m, tol) + 1, out, tol);
  return out;
}

namespace {

Povm exact_projective(const std::vector<std::vector<Complex>>& vectors, int dim) {
  Povm p;
  p.dim = dim;
  for (const auto& v : vectors) p.effects.emplace_back(projector_from(v));
  return p;
}

// Unit vector inside the column span of `basis` orthogonal to `other`,
// computed in local support coordinates so the result stays in the span.
std::vector<Complex> support_vector_orthogonal_to(const ComplexMatrix& basis,
                                                  const std::vector<Complex>& other) {
  const int d = basis.rows();
  const int r = basis.cols();
  std::vector<Complex> u(r, Complex(0.0, 0.0));
  double unorm = 0.0;
  for (int c = 0; c < r; ++c) {
    Complex acc = 0.0;
    for (int row = 0; row < d; ++row) acc += std::conj(basis(row, c)) * other[row];
    u[c] = acc;
    unorm += std::norm(acc);
  }
  std::vector<Complex> zbest(r, Complex(0.0, 0.0));
  double best = -1.0;
  for (int k = 0; k < r; ++k) {
    std::vector<Complex> z(r, Complex(0.0, 0.0));
    z[k] = 1.0;
    if (unorm > 1e-20) {
      const Complex overlap = std::conj(u[k]);
      for (int c = 0; c < r; ++c) z[c] -= overlap * u[c] / unorm;
    }
    double n2 = 0.0;
    for (const auto& zz : z) n2 += std::norm(zz);
    if (n2 > best) {
      best = n2;
      zbest = z;
    }
  }
  if (best <= 1e-16) throw ImpossibleRankClass("support intersection is empty");
  std::vector<Complex> w(d, Complex(0.0, 0.0));
  for (int row = 0; row < d; ++row)
    for (int c = 0; c < r; ++c) w[row] += basis(row, c) * zbest[c];
  double n = 0.0;
  for (const auto& zz : w) n += std::norm(zz);
  n = std::sqrt(n);
  for (auto& zz : w) zz /= n;
  return w;
}

void decompose_p133_rec(const Povm& m, double weight, int depth,
                        std::vector<std::pair<double, Povm>>& out, const Tolerances& tol) {
  if (depth < 0) throw DepthExceeded("rank reduction exceeded its budget");
  const auto ranks = rank_vector(m, tol.rank_cutoff);
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());

  if (sorted[0] == 0) throw ImpossibleRankClass("zero-rank effect cannot have unit trace");
  if (sorted == std::vector<int>{1, 1, 1}) {
    std::vector<std::vector<Complex>> vecs;
    for (const auto& e : m.effects) {
      const auto eig = eig_hermitian(e);
      vecs.push_back(column(eig.eigenvectors, 0));
    }
    out.emplace_back(weight, exact_projective(vecs, 3));
    return;
  }
  if (sorted == std::vector<int>{1, 1, 2})
    throw ImpossibleRankClass("two rank-one unit-trace effects force a projective third");
  if (sorted == std::vector<int>{1, 1, 3} || sorted == std::vector<int>{1, 3, 3})
    throw ImpossibleRankClass("rank pattern incompatible with unit traces");

  const int rank_sum = ranks[0] + ranks[1] + ranks[2];

  if (sorted == std::vector<int>{1, 2, 2}) {
    // The rank-one effect is a projector; the other two form a dichotomic
    // measurement on its orthogonal complement.
    const int one = static_cast<int>(std::find(ranks.begin(), ranks.end(), 1) - ranks.begin());
    const int i2 = (one + 1) % 3;
    const int i3 = (one + 2) % 3;
    const auto pin = eig_hermitian(m.effects[one]);
    const auto psi = column(pin.eigenvectors, 0);
    const auto espec = eig_hermitian(m.effects[i2]);
    const double lam1 = espec.eigenvalues[0];
    const double lam2 = espec.eigenvalues[1];
    const auto v1 = column(espec.eigenvectors, 0);
    const auto v2 = column(espec.eigenvectors, 1);
    std::vector<std::vector<Complex>> a(3), b(3);
    a[one] = psi;
    a[i2] = v1;
    a[i3] = v2;
    b[one] = psi;
    b[i2] = v2;
    b[i3] = v1;
    if (lam1 > 1e-12) out.emplace_back(weight * lam1, exact_projective(a, 3));
    if (lam2 > 1e-12) out.emplace_back(weight * lam2, exact_projective(b, 3));
    return;
  }

  if (sorted == std::vector<int>{2, 2, 2}) {
    // Traceless perturbation built from the Pauli copies on the supports.
    const auto pert = find_perturbation(m, true, tol);
    if (!pert) throw ImpossibleRankClass("no traceless perturbation found in the (2,2,2) class");
    const auto neg = negated(pert->operators);
    const double t_plus = boundary_step(m, pert->operators, tol);
    const double t_minus = boundary_step(m, neg, tol);
    if (!std::isfinite(t_plus) || !std::isfinite(t_minus))
      throw SolverFailure("perturbation direction did not reach the boundary");
    const Povm plus = step_along(m, t_plus, pert->operators);
    const Povm minus = step_along(m, t_minus, neg);
    for (const Povm* child : {&plus, &minus}) {
      const auto rv = rank_vector(*child, tol.rank_cutoff);
      if (rv[0] + rv[1] + rv[2] >= rank_sum)
        throw DepthExceeded("boundary step failed to reduce the total rank");
    }
    const double total = t_plus + t_minus;
    decompose_p133_rec(plus, weight * (t_minus / total), depth - 1, out, tol);
    decompose_p133_rec(minus, weight * (t_plus / total), depth - 1, out, tol);
    return;
  }

  // A rank-3 effect is present: subtract a projective measurement whose
  // basis vectors lie inside the supports of their effects.
  std::vector<int> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a2, int b2) { return ranks[a2] < ranks[b2]; });
  std::vector<std::vector<Complex>> psi(3);
  if (sorted == std::vector<int>{3, 3, 3}) {
    const auto basis = eig_hermitian(m.effects[0]);
    for (int i = 0; i < 3; ++i) psi[i] = column(basis.eigenvectors, i);
  } else {
    const int a0 = order[0];
    const auto top = eig_hermitian(m.effects[a0]);
    psi[a0] = column(top.eigenvectors, 0);
    const int a1 = order[1];
    psi[a1] = support_vector_orthogonal_to(support_basis(m.effects[a1], tol.rank_cutoff), psi[a0]);
    ComplexMatrix two(3, 2);
    for (int r = 0; r < 3; ++r) {
      two(r, 0) = psi[a0][r];
      two(r, 1) = psi[a1][r];
    }
    const ComplexMatrix full = complete_to_unitary(two);
    psi[order[2]] = column(full, 2);
  }
  double t_star = 1.0;
  for (int i = 0; i < 3; ++i) {
    const HermitianOperator inv = pseudo_inverse(m.effects[i]);
    const ComplexMatrix col = matvec_to_column(psi[i]);
    const double denom = (col.adjoint() * inv.matrix() * col)(0, 0).real();
    if (denom > 1e-12) t_star = std::min(t_star, 1.0 / denom);
  }
  if (t_star <= 1e-12) throw ImpossibleRankClass("projector subtraction made no progress");
  const Povm proj = exact_projective(psi, 3);
  if (t_star >= 1.0 - 1e-12) {
    out.emplace_back(weight, proj);
    return;
  }
  Povm rest;
  rest.dim = 3;
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix e = m.effects[i].matrix();
    ComplexMatrix sub = proj.effects[i].matrix();
    sub *= Complex(-t_star, 0.0);
    e += sub;
    e *= Complex(1.0 / (1.0 - t_star), 0.0);
    rest.effects.emplace_back(std::move(e));
  }
  const auto rv = rank_vector(rest, tol.rank_cutoff);
  if (rv[0] + rv[1] + rv[2] >= rank_sum)
    throw DepthExceeded("projector subtraction failed to reduce the total rank");
  out.emplace_back(weight * t_star, proj);
  decompose_p133_rec(rest, weight * (1.0 - t_star), depth - 1, out, tol);
}

}  // namespace

std::vector<std::pair<double, Povm>> decompose_trace_one_qutrit(const Povm& m, const Tolerances& tol) {
  if (m.dim != 3 || m.outcomes() != 3)
    throw InvalidArgument("trace-one decomposition expects a three-outcome qutrit POVM");
  for (const auto& e : m.effects)
    if (std::abs(e.trace_real() - 1.0) > 1e-9)
      throw NotTraceOne("effect trace " + std::to_string(e.trace_real()));
  std::vector<std::pair<double, Povm>> out;
  decompose_p133_rec(m, 1.0, 10, out, tol);
  return out;
}

}  // namespace povmsim
