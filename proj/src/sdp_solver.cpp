#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "povmsim/errors.hpp"
#include "povmsim/sdp.hpp"

// Homogeneous self-dual path following with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step. Variables live in a product of small
// dense PSD blocks and nonnegative scalars; equalities are the only
// constraints. The Schur system is solved by eliminating the declared
// constraint groups first (block-arrow factorisation), which keeps the
// subset-heavy measurement programs far below dense cost.

namespace povmsim::sdp {
namespace {

using Vec = std::vector<double>;

// ----- small dense kernels (row-major, full storage) -----

void mat_mul(const double* a, const double* b, double* c, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
      c[i * n + j] = s;
    }
}

// c = a^T b a for symmetric b.
void congruence(const double* a, const double* b, double* c, int n, Vec& scratch) {
  scratch.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += b[i * n + k] * a[k * n + j];
      scratch[i * n + j] = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a[k * n + i] * scratch[k * n + j];
      c[i * n + j] = s;
    }
}

double dot(const double* a, const double* b, int len) {
  double s = 0.0;
  for (int i = 0; i < len; ++i) s += a[i] * b[i];
  return s;
}

bool chol_in_place(double* a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (d <= 0.0 || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
    for (int i = 0; i < j; ++i) a[i * n + j] = 0.0;
  }
  return true;
}

bool chol_with_jitter(Vec& a, int n, double scale) {
  const Vec backup = a;
  double jitter = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (attempt > 0) {
      a = backup;
      jitter = (jitter == 0.0) ? 1e-14 * scale : jitter * 100.0;
      for (int i = 0; i < n; ++i) a[i * n + i] += jitter;
    }
    if (chol_in_place(a.data(), n)) return true;
  }
  return false;
}

void forward_solve(const double* l, double* r, int n) {
  for (int i = 0; i < n; ++i) {
    double s = r[i];
    for (int k = 0; k < i; ++k) s -= l[i * n + k] * r[k];
    r[i] = s / l[i * n + i];
  }
}

void backward_solve(const double* l, double* r, int n) {
  for (int i = n - 1; i >= 0; --i) {
    double s = r[i];
    for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * r[k];
    r[i] = s / l[i * n + i];
  }
}

void chol_solve(const double* l, double* r, int n) {
  forward_solve(l, r, n);
  backward_solve(l, r, n);
}

// Eigenvalues only, cyclic Jacobi.
void sym_eigenvalues(Vec a, int n, Vec& out) {
  out.resize(n);
  double scale = 0.0;
  for (double vv : a) scale = std::max(scale, std::abs(vv));
  for (int sweep = 0; sweep < 50 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        off = std::max(off, std::abs(apq));
        if (apq == 0.0) continue;
        const double tau = (a[p * n + p] - a[q * n + q]) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp + s * akq;
          a[k * n + q] = -s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk + s * aqk;
          a[q * n + k] = -s * apk + c * aqk;
        }
      }
    if (off <= 1e-14 * scale) break;
  }
  for (int i = 0; i < n; ++i) out[i] = a[i * n + i];
}

// One-sided Jacobi SVD: m = u diag(sigma) v^T.
void jacobi_svd(const Vec& m, int n, Vec& u, Vec& sigma, Vec& v) {
  u = m;
  v.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < n; ++i) {
          app += u[i * n + p] * u[i * n + p];
          aqq += u[i * n + q] * u[i * n + q];
          apq += u[i * n + p] * u[i * n + q];
        }
        if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) + 1e-300) continue;
        converged = false;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < n; ++i) {
          const double uip = u[i * n + p];
          const double uiq = u[i * n + q];
          u[i * n + p] = c * uip - s * uiq;
          u[i * n + q] = s * uip + c * uiq;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v[i * n + p];
          const double viq = v[i * n + q];
          v[i * n + p] = c * vip - s * viq;
          v[i * n + q] = s * vip + c * viq;
        }
      }
    if (converged) break;
  }
  sigma.resize(n);
  for (int j = 0; j < n; ++j) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += u[i * n + j] * u[i * n + j];
    sigma[j] = std::sqrt(norm);
    const double inv = sigma[j] > 0.0 ? 1.0 / sigma[j] : 0.0;
    for (int i = 0; i < n; ++i) u[i * n + j] *= inv;
  }
}

// ----- solver-side problem form -----

struct Row {
  double rhs = 0.0;
  int group = -1;
  std::vector<std::pair<int, Vec>> mat_terms;      // (PSD block, dense sym coefficient)
  std::vector<std::pair<int, double>> sca_terms;   // (scalar index, coefficient)
};

struct BlockVec {
  std::vector<Vec> mats;
  Vec scalars;
  void set_zero() {
    for (auto& m : mats) std::fill(m.begin(), m.end(), 0.0);
    std::fill(scalars.begin(), scalars.end(), 0.0);
  }
};

struct Shape {
  std::vector<int> mat_dims;
  int n_scalars = 0;
  BlockVec make() const {
    BlockVec v;
    v.mats.reserve(mat_dims.size());
    for (int n : mat_dims) v.mats.emplace_back(Vec(n * n, 0.0));
    v.scalars.assign(n_scalars, 0.0);
    return v;
  }
  double degree() const {
    double nu = n_scalars;
    for (int n : mat_dims) nu += n;
    return nu;
  }
};

struct Scaling {
  Vec r, rinv, lambda;
  Vec lx, ls;
};

struct Direction {
  BlockVec dx, ds;
  Vec dy;
  double dtau = 0.0, dkappa = 0.0;
};

class Solver {
 public:
  Shape shape;
  std::vector<Row> rows;
  BlockVec c;
  Vec b;
  SolverOptions opts;
  int n_herm = 0;

  // derived structure
  std::vector<int> zone;         // per row: group id or -1 (shared)
  std::vector<int> local_index;  // per row: index within its zone
  std::vector<std::vector<int>> group_rows;
  std::vector<int> shared_rows;
  std::vector<std::vector<std::pair<int, const Vec*>>> block_rows;  // per PSD block: (row, coeff)
  std::vector<std::vector<std::pair<int, double>>> scalar_rows;     // per scalar: (row, coeff)

  // de-homogenised embedded primal solution, filled on Optimal exit
  std::vector<Vec> out_raw_x;
  Vec out_raw_scalars;

  SdpSolution run();

 private:
  // Best iterate snapshot: rescues borderline runs that meet the tolerances
  // before a late-stage numerical collapse.
  struct Snapshot {
    BlockVec x;
    Vec y;
    double tau = 1.0;
    double score = std::numeric_limits<double>::infinity();
    double pres = 0.0, dres = 0.0, gap = 0.0;
    int iter = 0;
    bool valid = false;
  };
  Snapshot best_;

 public:

 private:
  BlockVec x, s;
  Vec y;
  double tau = 1.0, kappa = 1.0;

  std::vector<Scaling> scal;
  Vec scalar_w2;
  std::vector<std::vector<Vec>> tilde;  // scaled coefficients per block

  std::vector<Vec> d_chol;  // per group
  std::vector<Vec> e_mat;   // per group: m_g x m_shared, already D^{-1} B
  std::vector<Vec> b_mat;   // per group: raw coupling
  std::vector<Vec> d_raw;   // per group: unfactored diagonal blocks
  Vec c_raw;                // unfactored shared block
  Vec s_chol;
  int m_shared = 0;

  Vec scratch_;

  double bdot(const BlockVec& a, const BlockVec& bb) const {
    double sum = 0.0;
    for (size_t i = 0; i < shape.mat_dims.size(); ++i)
      sum += dot(a.mats[i].data(), bb.mats[i].data(), shape.mat_dims[i] * shape.mat_dims[i]);
    sum += dot(a.scalars.data(), bb.scalars.data(), shape.n_scalars);
    return sum;
  }
  void baxpy(double w, const BlockVec& a, BlockVec& out) const {
    for (size_t i = 0; i < shape.mat_dims.size(); ++i) {
      const int len = shape.mat_dims[i] * shape.mat_dims[i];
      for (int k = 0; k < len; ++k) out.mats[i][k] += w * a.mats[i][k];
    }
    for (int k = 0; k < shape.n_scalars; ++k) out.scalars[k] += w * a.scalars[k];
  }
  double bnorm(const BlockVec& a) const { return std::sqrt(std::max(0.0, bdot(a, a))); }

  void apply_a(const BlockVec& v, Vec& out) const {
    out.assign(rows.size(), 0.0);
    for (int bidx = 0; bidx < n_herm; ++bidx) {
      const int n = shape.mat_dims[bidx];
      for (const auto& [k, f] : block_rows[bidx]) out[k] += dot(f->data(), v.mats[bidx].data(), n * n);
    }
    for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
      for (const auto& [k, cv] : scalar_rows[sidx]) out[k] += cv * v.scalars[sidx];
  }

  void apply_at(const Vec& yv, BlockVec& out) const {
    out.set_zero();
    for (int bidx = 0; bidx < n_herm; ++bidx) {
      const int n = shape.mat_dims[bidx];
      auto& acc = out.mats[bidx];
      for (const auto& [k, f] : block_rows[bidx]) {
        const double w = yv[k];
        if (w == 0.0) continue;
        const auto& fv = *f;
        for (int t = 0; t < n * n; ++t) acc[t] += w * fv[t];
      }
    }
    for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
      for (const auto& [k, cv] : scalar_rows[sidx]) out.scalars[sidx] += yv[k] * cv;
  }

  // out = R (R^T z R) R^T per block; w2 * z on scalars.
  void hinv(const BlockVec& z, BlockVec& out) {
    for (int bidx = 0; bidx < n_herm; ++bidx) {
      const int n = shape.mat_dims[bidx];
      Vec inner(n * n), rt(n * n);
      congruence(scal[bidx].r.data(), z.mats[bidx].data(), inner.data(), n, scratch_);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rt[i * n + j] = scal[bidx].r[j * n + i];
      congruence(rt.data(), inner.data(), out.mats[bidx].data(), n, scratch_);
    }
    for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
      out.scalars[sidx] = scalar_w2[sidx] * z.scalars[sidx];
  }

  // (A H^{-1} q)_k using the scaled coefficients.
  void apply_ainvh(const BlockVec& q, Vec& out) {
    out.assign(rows.size(), 0.0);
    Vec qt;
    for (int bidx = 0; bidx < n_herm; ++bidx) {
      const int n = shape.mat_dims[bidx];
      qt.assign(n * n, 0.0);
      congruence(scal[bidx].r.data(), q.mats[bidx].data(), qt.data(), n, scratch_);
      const auto& krows = block_rows[bidx];
      for (size_t j = 0; j < krows.size(); ++j)
        out[krows[j].first] += dot(tilde[bidx][j].data(), qt.data(), n * n);
    }
    for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
      for (const auto& [k, cv] : scalar_rows[sidx])
        out[k] += cv * scalar_w2[sidx] * q.scalars[sidx];
  }

  bool update_scaling();
  bool assemble_and_factor();
  void schur_solve_once(const Vec& rhs, Vec& out) const;
  void apply_schur(const Vec& z, Vec& out) const;
  // One round of iterative refinement: the Schur system turns ill-conditioned
  // near degenerate optima, and the correction restores the lost digits.
  void schur_solve(const Vec& rhs, Vec& out) const;
  double max_step(const BlockVec& v, const BlockVec& dv, bool use_x_chol) const;
  void compute_direction(double gamma, double mu, const BlockVec& rd, const Vec& rp, double rg,
                         const Vec& v1, const BlockVec& w1, double denom, const Direction* affine,
                         Direction& out);
};

bool Solver::update_scaling() {
  Vec u, sigma, vv, m;
  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    Scaling& sc = scal[bidx];
    sc.lx = x.mats[bidx];
    sc.ls = s.mats[bidx];
    double xscale = 0.0, sscale = 0.0;
    for (int i = 0; i < n; ++i) {
      xscale = std::max(xscale, x.mats[bidx][i * n + i]);
      sscale = std::max(sscale, s.mats[bidx][i * n + i]);
    }
    if (!chol_with_jitter(sc.lx, n, xscale)) return false;
    if (!chol_with_jitter(sc.ls, n, sscale)) return false;
    // m = ls^T lx
    m.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = std::max(i, j); k < n; ++k) acc += sc.ls[k * n + i] * sc.lx[k * n + j];
        m[i * n + j] = acc;
      }
    jacobi_svd(m, n, u, sigma, vv);
    for (double sv : sigma)
      if (!(sv > 0.0)) return false;
    sc.lambda = sigma;
    sc.r.assign(n * n, 0.0);
    sc.rinv.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double isq = 1.0 / std::sqrt(sigma[j]);
        double racc = 0.0;
        for (int k = 0; k < n; ++k) racc += sc.lx[i * n + k] * vv[k * n + j];
        sc.r[i * n + j] = racc * isq;
      }
    // rinv = diag(sigma^{-1/2}) u^T ls^T, i.e. rinv(i,j) = isq_i * sum_k u(k,i) ls(j,k)
    for (int i = 0; i < n; ++i) {
      const double isq = 1.0 / std::sqrt(sigma[i]);
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k <= j; ++k) acc += u[k * n + i] * sc.ls[j * n + k];
        sc.rinv[i * n + j] = isq * acc;
      }
    }
  }
  for (int sidx = 0; sidx < shape.n_scalars; ++sidx) {
    if (x.scalars[sidx] <= 0.0 || s.scalars[sidx] <= 0.0) return false;
    scalar_w2[sidx] = x.scalars[sidx] / s.scalars[sidx];
  }
  return true;
}

bool Solver::assemble_and_factor() {
  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    const auto& krows = block_rows[bidx];
    tilde[bidx].resize(krows.size());
    for (size_t j = 0; j < krows.size(); ++j) {
      tilde[bidx][j].assign(n * n, 0.0);
      congruence(scal[bidx].r.data(), krows[j].second->data(), tilde[bidx][j].data(), n, scratch_);
    }
  }

  const int n_groups = static_cast<int>(group_rows.size());
  m_shared = static_cast<int>(shared_rows.size());
  d_raw.assign(n_groups, {});
  b_mat.assign(n_groups, {});
  for (int g = 0; g < n_groups; ++g) {
    const int mg = static_cast<int>(group_rows[g].size());
    d_raw[g].assign(mg * mg, 0.0);
    b_mat[g].assign(mg * m_shared, 0.0);
  }
  Vec cm(m_shared * m_shared, 0.0);
  auto& d = d_raw;

  auto accumulate = [&](int k, int l, double v) {
    const int zk = zone[k], zl = zone[l];
    const int ik = local_index[k], il = local_index[l];
    if (zk < 0 && zl < 0) {
      cm[ik * m_shared + il] += v;
      if (k != l) cm[il * m_shared + ik] += v;
    } else if (zk >= 0 && zl >= 0) {
      const int mg = static_cast<int>(group_rows[zk].size());
      d[zk][ik * mg + il] += v;
      if (k != l) d[zk][il * mg + ik] += v;
    } else if (zk >= 0) {
      b_mat[zk][ik * m_shared + il] += v;
    } else {
      b_mat[zl][il * m_shared + ik] += v;
    }
  };

  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    const auto& krows = block_rows[bidx];
    for (size_t j1 = 0; j1 < krows.size(); ++j1)
      for (size_t j2 = j1; j2 < krows.size(); ++j2)
        accumulate(krows[j1].first, krows[j2].first,
                   dot(tilde[bidx][j1].data(), tilde[bidx][j2].data(), n * n));
  }
  for (int sidx = 0; sidx < shape.n_scalars; ++sidx) {
    const auto& krows = scalar_rows[sidx];
    for (size_t j1 = 0; j1 < krows.size(); ++j1)
      for (size_t j2 = j1; j2 < krows.size(); ++j2)
        accumulate(krows[j1].first, krows[j2].first,
                   scalar_w2[sidx] * krows[j1].second * krows[j2].second);
  }

  c_raw = cm;
  d_chol.assign(n_groups, {});
  e_mat.assign(n_groups, {});
  for (int g = 0; g < n_groups; ++g) {
    const int mg = static_cast<int>(group_rows[g].size());
    double scale = 1.0;
    for (int i = 0; i < mg; ++i) scale = std::max(scale, d[g][i * mg + i]);
    d_chol[g] = d[g];
    if (!chol_with_jitter(d_chol[g], mg, scale)) return false;
    e_mat[g] = b_mat[g];
    Vec col(mg);
    for (int jc = 0; jc < m_shared; ++jc) {
      for (int i = 0; i < mg; ++i) col[i] = e_mat[g][i * m_shared + jc];
      chol_solve(d_chol[g].data(), col.data(), mg);
      for (int i = 0; i < mg; ++i) e_mat[g][i * m_shared + jc] = col[i];
    }
    for (int i = 0; i < m_shared; ++i)
      for (int jc = i; jc < m_shared; ++jc) {
        double acc = 0.0;
        for (int k = 0; k < mg; ++k) acc += b_mat[g][k * m_shared + i] * e_mat[g][k * m_shared + jc];
        cm[i * m_shared + jc] -= acc;
        if (i != jc) cm[jc * m_shared + i] -= acc;
      }
  }
  double cscale = 1.0;
  for (int i = 0; i < m_shared; ++i) cscale = std::max(cscale, cm[i * m_shared + i]);
  s_chol = cm;
  if (m_shared > 0 && !chol_with_jitter(s_chol, m_shared, cscale)) return false;
  return true;
}

void Solver::schur_solve_once(const Vec& rhs, Vec& out) const {
  const int n_groups = static_cast<int>(group_rows.size());
  out.assign(rows.size(), 0.0);
  std::vector<Vec> tg(n_groups);
  Vec rs(m_shared);
  for (int i = 0; i < m_shared; ++i) rs[i] = rhs[shared_rows[i]];
  for (int g = 0; g < n_groups; ++g) {
    const int mg = static_cast<int>(group_rows[g].size());
    tg[g].resize(mg);
    for (int i = 0; i < mg; ++i) tg[g][i] = rhs[group_rows[g][i]];
    chol_solve(d_chol[g].data(), tg[g].data(), mg);
    // rs -= B_g^T D_g^{-1} r_g = E_g^T r_g
    for (int jc = 0; jc < m_shared; ++jc) {
      double acc = 0.0;
      for (int i = 0; i < mg; ++i) acc += e_mat[g][i * m_shared + jc] * rhs[group_rows[g][i]];
      rs[jc] -= acc;
    }
  }
  if (m_shared > 0) chol_solve(s_chol.data(), rs.data(), m_shared);
  for (int g = 0; g < n_groups; ++g) {
    const int mg = static_cast<int>(group_rows[g].size());
    for (int i = 0; i < mg; ++i) {
      double acc = tg[g][i];
      for (int jc = 0; jc < m_shared; ++jc) acc -= e_mat[g][i * m_shared + jc] * rs[jc];
      out[group_rows[g][i]] = acc;
    }
  }
  for (int i = 0; i < m_shared; ++i) out[shared_rows[i]] = rs[i];
}

void Solver::apply_schur(const Vec& z, Vec& out) const {
  const int n_groups = static_cast<int>(group_rows.size());
  out.assign(rows.size(), 0.0);
  for (int g = 0; g < n_groups; ++g) {
    const int mg = static_cast<int>(group_rows[g].size());
    for (int i = 0; i < mg; ++i) {
      double acc = 0.0;
      for (int j = 0; j < mg; ++j) acc += d_raw[g][i * mg + j] * z[group_rows[g][j]];
      for (int jc = 0; jc < m_shared; ++jc) acc += b_mat[g][i * m_shared + jc] * z[shared_rows[jc]];
      out[group_rows[g][i]] = acc;
    }
    for (int jc = 0; jc < m_shared; ++jc) {
      double acc = 0.0;
      for (int i = 0; i < mg; ++i) acc += b_mat[g][i * m_shared + jc] * z[group_rows[g][i]];
      out[shared_rows[jc]] += acc;
    }
  }
  for (int i = 0; i < m_shared; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m_shared; ++j) acc += c_raw[i * m_shared + j] * z[shared_rows[j]];
    out[shared_rows[i]] += acc;
  }
}

void Solver::schur_solve(const Vec& rhs, Vec& out) const {
  schur_solve_once(rhs, out);
  Vec hz, resid(rhs.size()), corr;
  for (int round = 0; round < 2; ++round) {
    apply_schur(out, hz);
    for (size_t k = 0; k < rhs.size(); ++k) resid[k] = rhs[k] - hz[k];
    schur_solve_once(resid, corr);
    for (size_t k = 0; k < rhs.size(); ++k) out[k] += corr[k];
  }
}

double Solver::max_step(const BlockVec& v, const BlockVec& dv, bool use_x_chol) const {
  double alpha = std::numeric_limits<double>::infinity();
  Vec bmat, eigs, colv, rowv;
  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    bmat = dv.mats[bidx];
    const Vec& l = use_x_chol ? scal[bidx].lx : scal[bidx].ls;
    colv.resize(n);
    rowv.resize(n);
    for (int col = 0; col < n; ++col) {
      for (int i = 0; i < n; ++i) colv[i] = bmat[i * n + col];
      forward_solve(l.data(), colv.data(), n);
      for (int i = 0; i < n; ++i) bmat[i * n + col] = colv[i];
    }
    for (int rowi = 0; rowi < n; ++rowi) {
      for (int j = 0; j < n; ++j) rowv[j] = bmat[rowi * n + j];
      forward_solve(l.data(), rowv.data(), n);
      for (int j = 0; j < n; ++j) bmat[rowi * n + j] = rowv[j];
    }
    sym_eigenvalues(bmat, n, eigs);
    const double lam_min = *std::min_element(eigs.begin(), eigs.end());
    if (lam_min < 0.0) alpha = std::min(alpha, -1.0 / lam_min);
  }
  for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
    if (dv.scalars[sidx] < 0.0) alpha = std::min(alpha, -v.scalars[sidx] / dv.scalars[sidx]);
  return alpha;
}

void Solver::compute_direction(double gamma, double mu, const BlockVec& rd, const Vec& rp, double rg,
                               const Vec& v1, const BlockVec& w1, double denom,
                               const Direction* affine, Direction& out) {
  const size_t m = rows.size();
  BlockVec q = shape.make();
  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    const auto& lam = scal[bidx].lambda;
    Vec dc(n * n, 0.0);
    for (int i = 0; i < n; ++i) dc[i * n + i] = gamma * mu - lam[i] * lam[i];
    if (affine) {
      // Mehrotra second-order term in scaled space.
      Vec xa(n * n), sa(n * n), prod(n * n), rinv_t(n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rinv_t[i * n + j] = scal[bidx].rinv[j * n + i];
      congruence(rinv_t.data(), affine->dx.mats[bidx].data(), xa.data(), n, scratch_);
      congruence(scal[bidx].r.data(), affine->ds.mats[bidx].data(), sa.data(), n, scratch_);
      mat_mul(xa.data(), sa.data(), prod.data(), n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dc[i * n + j] -= 0.5 * (prod[i * n + j] + prod[j * n + i]);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dc[i * n + j] = 2.0 * dc[i * n + j] / (lam[i] + lam[j]);
    congruence(scal[bidx].rinv.data(), dc.data(), q.mats[bidx].data(), n, scratch_);
    for (int i = 0; i < n * n; ++i) q.mats[bidx][i] -= (1.0 - gamma) * rd.mats[bidx][i];
  }
  for (int sidx = 0; sidx < shape.n_scalars; ++sidx) {
    double dcs = gamma * mu - x.scalars[sidx] * s.scalars[sidx];
    if (affine) dcs -= affine->dx.scalars[sidx] * affine->ds.scalars[sidx];
    q.scalars[sidx] = dcs / x.scalars[sidx] - (1.0 - gamma) * rd.scalars[sidx];
  }
  double dktau = gamma * mu - tau * kappa;
  if (affine) dktau -= affine->dtau * affine->dkappa;

  Vec rhs2, v2;
  apply_ainvh(q, rhs2);
  for (size_t k = 0; k < m; ++k) rhs2[k] = (1.0 - gamma) * rp[k] - rhs2[k];
  schur_solve(rhs2, v2);

  BlockVec w2 = shape.make();
  apply_at(v2, w2);
  baxpy(1.0, q, w2);
  {
    BlockVec tmp = shape.make();
    hinv(w2, tmp);
    std::swap(w2, tmp);
  }
  const double num = -(1.0 - gamma) * rg - bdot(c, w2) + dot(b.data(), v2.data(), static_cast<int>(m)) -
                     dktau / tau;
  out.dtau = num / denom;
  out.dy = v2;
  for (size_t k = 0; k < m; ++k) out.dy[k] += out.dtau * v1[k];
  out.dx = w2;
  baxpy(out.dtau, w1, out.dx);
  apply_at(out.dy, out.ds);
  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    for (int i = 0; i < n * n; ++i)
      out.ds.mats[bidx][i] =
          (1.0 - gamma) * rd.mats[bidx][i] + c.mats[bidx][i] * out.dtau - out.ds.mats[bidx][i];
  }
  for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
    out.ds.scalars[sidx] =
        (1.0 - gamma) * rd.scalars[sidx] + c.scalars[sidx] * out.dtau - out.ds.scalars[sidx];
  out.dkappa = (dktau - kappa * out.dtau) / tau;
}

SdpSolution Solver::run() {
  SdpSolution sol;
  const size_t m = rows.size();
  const double nu = shape.degree() + 1.0;

  scal.resize(n_herm);
  scalar_w2.assign(shape.n_scalars, 0.0);
  tilde.resize(n_herm);

  x = shape.make();
  s = shape.make();
  const double bn = std::sqrt(dot(b.data(), b.data(), static_cast<int>(m)));
  const double cn = bnorm(c);
  const double xi = std::sqrt(std::max(1.0, bn));
  const double eta = std::sqrt(std::max(1.0, cn));
  for (int bidx = 0; bidx < n_herm; ++bidx) {
    const int n = shape.mat_dims[bidx];
    for (int i = 0; i < n; ++i) {
      x.mats[bidx][i * n + i] = xi;
      s.mats[bidx][i * n + i] = eta;
    }
  }
  for (int sidx = 0; sidx < shape.n_scalars; ++sidx) {
    x.scalars[sidx] = xi;
    s.scalars[sidx] = eta;
  }
  y.assign(m, 0.0);
  tau = 1.0;
  kappa = 1.0;

  BlockVec rd = shape.make();
  BlockVec at_y = shape.make();
  Vec rp(m), av;
  Direction aff, comb;
  aff.dx = shape.make();
  aff.ds = shape.make();
  aff.dy.assign(m, 0.0);
  comb.dx = shape.make();
  comb.ds = shape.make();
  comb.dy.assign(m, 0.0);

  auto export_primal = [&](const BlockVec& xx, const Vec& yy, double tt) {
    sol.dual_multipliers.resize(m);
    for (size_t k = 0; k < m; ++k) sol.dual_multipliers[k] = yy[k] / tt;
    out_raw_x.clear();
    for (int bidx = 0; bidx < n_herm; ++bidx) {
      Vec raw = xx.mats[bidx];
      for (double& vv : raw) vv /= tt;
      out_raw_x.push_back(std::move(raw));
    }
    out_raw_scalars.assign(xx.scalars.begin(), xx.scalars.end());
    for (double& vv : out_raw_scalars) vv /= tt;
  };
  auto finish = [&](SolveStatus st, const std::string& msg, int it) {
    if (st == SolveStatus::NumericalTrouble && best_.valid && best_.score <= 1.0) {
      // An earlier iterate already met the tolerances; report it.
      export_primal(best_.x, best_.y, best_.tau);
      sol.objective = -bdot(c, best_.x) / best_.tau;
      sol.dual_objective = -dot(b.data(), best_.y.data(), static_cast<int>(m)) / best_.tau;
      sol.duality_gap = best_.gap;
      sol.primal_residual = best_.pres;
      sol.dual_residual = best_.dres;
      sol.status = SolveStatus::Optimal;
      sol.message = "converged (best iterate before " + msg + ")";
      sol.iterations = it;
      return sol;
    }
    sol.status = st;
    sol.message = msg;
    sol.iterations = it;
    return sol;
  };

  for (int iter = 0;; ++iter) {
    apply_a(x, av);
    for (size_t k = 0; k < m; ++k) rp[k] = b[k] * tau - av[k];
    apply_at(y, at_y);
    for (int bidx = 0; bidx < n_herm; ++bidx) {
      const int n = shape.mat_dims[bidx];
      for (int i = 0; i < n * n; ++i)
        rd.mats[bidx][i] = c.mats[bidx][i] * tau - at_y.mats[bidx][i] - s.mats[bidx][i];
    }
    for (int sidx = 0; sidx < shape.n_scalars; ++sidx)
      rd.scalars[sidx] = c.scalars[sidx] * tau - at_y.scalars[sidx] - s.scalars[sidx];

    const double cx = bdot(c, x);
    const double by = dot(b.data(), y.data(), static_cast<int>(m));
    const double rg = kappa + cx - by;
    const double xs = bdot(x, s);
    const double mu = (xs + tau * kappa) / nu;
    if (!std::isfinite(xs) || !std::isfinite(tau) || xs < 0.0)
      return finish(SolveStatus::NumericalTrouble, "iterate left the cone numerically", iter);

    const double pres = std::sqrt(dot(rp.data(), rp.data(), static_cast<int>(m))) / tau / (1.0 + bn);
    const double dres = bnorm(rd) / tau / (1.0 + cn);
    const double pobj = cx / tau;
    const double dobj = by / tau;
    const double gap = xs / (tau * tau);
    const double relgap = gap / std::max(1.0, std::abs(pobj));

    sol.objective = -pobj;
    sol.dual_objective = -dobj;
    sol.duality_gap = gap;
    sol.primal_residual = pres;
    sol.dual_residual = dres;

    if (opts.verbose)
      std::fprintf(stderr, "iter %3d  pres %9.2e dres %9.2e gap %9.2e tau %8.2e kappa %8.2e\n", iter,
                   pres, dres, gap, tau, kappa);

    const double score = std::max({pres / opts.feas_tol, dres / opts.feas_tol, relgap / opts.gap_tol});
    if (std::isfinite(score) && score < best_.score) {
      best_.x = x;
      best_.y = y;
      best_.tau = tau;
      best_.score = score;
      best_.pres = pres;
      best_.dres = dres;
      best_.gap = gap;
      best_.iter = iter;
      best_.valid = true;
    }

    if (opts.check_weak_duality && pres <= opts.feas_tol && dres <= opts.feas_tol) {
      const double viol = sol.objective - sol.dual_objective;
      if (viol > 1e-9 * std::max(1.0, std::abs(sol.objective)) + 10.0 * (pres + dres))
        throw SolverFailure("weak duality violated at a near-feasible iterate");
    }

    if (pres <= opts.feas_tol && dres <= opts.feas_tol && relgap <= opts.gap_tol) {
      export_primal(x, y, tau);
      return finish(SolveStatus::Optimal, "converged", iter);
    }

    if (by > 0.0) {
      BlockVec ray = shape.make();
      apply_at(y, ray);
      baxpy(1.0, s, ray);
      const double res = bnorm(ray) / by;
      if (res <= opts.dual_ray_tol * (1.0 + cn)) {
        sol.farkas_ray.resize(m);
        for (size_t k = 0; k < m; ++k) sol.farkas_ray[k] = y[k] / by;
        return finish(SolveStatus::Infeasible, "dual improving ray found", iter);
      }
    }
    if (tau <= opts.tau_kappa_ratio * kappa) {
      if (by > 0.0) {
        sol.farkas_ray.resize(m);
        for (size_t k = 0; k < m; ++k) sol.farkas_ray[k] = y[k] / by;
        return finish(SolveStatus::Infeasible, "tau/kappa collapsed; primal infeasible", iter);
      }
      return finish(SolveStatus::NumericalTrouble, "tau/kappa collapsed without certificate", iter);
    }
    if (iter >= opts.max_iterations)
      return finish(SolveStatus::NumericalTrouble, "iteration limit reached", iter);

    if (!update_scaling())
      return finish(SolveStatus::NumericalTrouble, "lost cone interior while scaling", iter);
    if (!assemble_and_factor())
      return finish(SolveStatus::NumericalTrouble, "Schur factorisation failed", iter);

    // tau-column solve shared by predictor and corrector.
    BlockVec hc = shape.make();
    hinv(c, hc);
    Vec rhs1, v1;
    apply_a(hc, rhs1);
    for (size_t k = 0; k < m; ++k) rhs1[k] += b[k];
    schur_solve(rhs1, v1);
    BlockVec w1 = shape.make();
    apply_at(v1, w1);
    baxpy(-1.0, c, w1);
    {
      BlockVec tmp = shape.make();
      hinv(w1, tmp);
      std::swap(w1, tmp);
    }
    const double denom = bdot(c, w1) - dot(b.data(), v1.data(), static_cast<int>(m)) - kappa / tau;

    compute_direction(0.0, mu, rd, rp, rg, v1, w1, denom, nullptr, aff);
    double alpha_aff = std::min(max_step(x, aff.dx, true), max_step(s, aff.ds, false));
    if (aff.dtau < 0.0) alpha_aff = std::min(alpha_aff, -tau / aff.dtau);
    if (aff.dkappa < 0.0) alpha_aff = std::min(alpha_aff, -kappa / aff.dkappa);
    alpha_aff = std::min(1.0, alpha_aff);

    double xs_aff;
    {
      BlockVec xa = x, sa = s;
      baxpy(alpha_aff, aff.dx, xa);
      baxpy(alpha_aff, aff.ds, sa);
      xs_aff = bdot(xa, sa) + (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa);
    }
    double sigma = std::pow(std::max(0.0, xs_aff / (xs + tau * kappa)), 3.0);
    sigma = std::min(1.0, sigma);

    compute_direction(sigma, mu, rd, rp, rg, v1, w1, denom, &aff, comb);
    double alpha = std::min(max_step(x, comb.dx, true), max_step(s, comb.ds, false));
    if (comb.dtau < 0.0) alpha = std::min(alpha, -tau / comb.dtau);
    if (comb.dkappa < 0.0) alpha = std::min(alpha, -kappa / comb.dkappa);
    alpha = std::min(1.0, opts.step_fraction * alpha);
    if (!std::isfinite(alpha) || alpha <= 1e-13)
      return finish(SolveStatus::NumericalTrouble, "step collapsed", iter);

    baxpy(alpha, comb.dx, x);
    baxpy(alpha, comb.ds, s);
    for (size_t k = 0; k < m; ++k) y[k] += alpha * comb.dy[k];
    tau += alpha * comb.dtau;
    kappa += alpha * comb.dkappa;
  }
}

}  // namespace

SdpSolution SdpProblem::solve(const SolverOptions& opts) const {
  Solver sv;
  sv.opts = opts;
  sv.n_herm = static_cast<int>(hermitian_dims_.size());
  sv.shape.mat_dims.reserve(hermitian_dims_.size());
  for (int d : hermitian_dims_) sv.shape.mat_dims.push_back(2 * d);
  const int extra_slacks = static_cast<int>(scalar_bounds_.size());
  sv.shape.n_scalars = scalar_count_ + extra_slacks;
  if (sv.n_herm == 0 && sv.shape.n_scalars == 0) throw IllFormedProblem("no variables declared");

  // Rows: user equalities (duplicate terms merged), then bound rows.
  for (const auto& eq : equalities_) {
    Row row;
    row.rhs = eq.rhs;
    row.group = eq.group;
    std::map<int, Vec> merged;
    for (const auto& mt : eq.matrix_terms) {
      auto [it, fresh] = merged.try_emplace(mt.block, mt.coeff);
      if (!fresh)
        for (size_t i = 0; i < mt.coeff.size(); ++i) it->second[i] += mt.coeff[i];
    }
    for (auto& [blk, coeff] : merged) row.mat_terms.emplace_back(blk, std::move(coeff));
    std::map<int, double> merged_s;
    for (const auto& st : eq.scalar_terms) merged_s[st.scalar] += st.coeff;
    for (const auto& [sidx, cv] : merged_s) row.sca_terms.emplace_back(sidx, cv);
    if (row.mat_terms.empty() && row.sca_terms.empty()) {
      if (std::abs(row.rhs) > 1e-14) throw IllFormedProblem("equality with no terms and nonzero rhs");
      continue;
    }
    sv.rows.push_back(std::move(row));
  }
  for (size_t i = 0; i < scalar_bounds_.size(); ++i) {
    Row row;
    row.rhs = scalar_bounds_[i].second;
    row.group = SdpProblem::kShared;
    row.sca_terms.emplace_back(scalar_bounds_[i].first, 1.0);
    row.sca_terms.emplace_back(scalar_count_ + static_cast<int>(i), 1.0);
    sv.rows.push_back(std::move(row));
  }
  if (sv.rows.empty()) throw IllFormedProblem("no equality constraints or bounds");

  sv.b.resize(sv.rows.size());
  for (size_t k = 0; k < sv.rows.size(); ++k) sv.b[k] = sv.rows[k].rhs;

  // Internal objective: minimise -user objective.
  sv.c = sv.shape.make();
  for (const auto& mt : obj_matrix_) {
    auto& acc = sv.c.mats[mt.block];
    for (size_t i = 0; i < mt.coeff.size(); ++i) acc[i] -= mt.coeff[i];
  }
  for (const auto& st : obj_scalar_) sv.c.scalars[st.scalar] -= st.coeff;

  // Incidence maps.
  sv.block_rows.assign(sv.n_herm, {});
  sv.scalar_rows.assign(sv.shape.n_scalars, {});
  for (size_t k = 0; k < sv.rows.size(); ++k) {
    for (const auto& [blk, coeff] : sv.rows[k].mat_terms)
      sv.block_rows[blk].emplace_back(static_cast<int>(k), &coeff);
    for (const auto& [sidx, cv] : sv.rows[k].sca_terms)
      sv.scalar_rows[sidx].emplace_back(static_cast<int>(k), cv);
  }

  // Group layout + disjointness validation.
  std::map<int, int> group_ids;
  for (const auto& row : sv.rows)
    if (row.group >= 0) group_ids.try_emplace(row.group, static_cast<int>(group_ids.size()));
  sv.group_rows.assign(group_ids.size(), {});
  sv.zone.assign(sv.rows.size(), -1);
  sv.local_index.assign(sv.rows.size(), -1);
  for (size_t k = 0; k < sv.rows.size(); ++k) {
    if (sv.rows[k].group >= 0) {
      const int g = group_ids[sv.rows[k].group];
      sv.zone[k] = g;
      sv.local_index[k] = static_cast<int>(sv.group_rows[g].size());
      sv.group_rows[g].push_back(static_cast<int>(k));
    } else {
      sv.local_index[k] = static_cast<int>(sv.shared_rows.size());
      sv.shared_rows.push_back(static_cast<int>(k));
    }
  }
  const auto check_one_group = [&](const auto& incidences, const char* what) {
    for (const auto& inc : incidences) {
      int seen = -1;
      for (const auto& entry : inc) {
        const int z = sv.zone[entry.first];
        if (z < 0) continue;
        if (seen < 0) seen = z;
        else if (seen != z)
          throw IllFormedProblem(std::string(what) + " touched by two constraint groups");
      }
    }
  };
  check_one_group(sv.block_rows, "hermitian block");
  check_one_group(sv.scalar_rows, "scalar block");

  SdpSolution sol = sv.run();

  // Map raw embedded solution blocks back to Hermitian operators.
  if (sol.status == SolveStatus::Optimal) {
    sol.hermitian_blocks.clear();
    for (size_t bidx = 0; bidx < hermitian_dims_.size(); ++bidx) {
      const int d = hermitian_dims_[bidx];
      const int n = 2 * d;
      const Vec& raw = sv.out_raw_x[bidx];
      ComplexMatrix h(d, d);
      for (int r = 0; r < d; ++r)
        for (int cidx = 0; cidx < d; ++cidx) {
          const double re = 0.5 * (raw[r * n + cidx] + raw[(d + r) * n + (d + cidx)]);
          const double im = 0.5 * (raw[(d + r) * n + cidx] - raw[r * n + (d + cidx)]);
          h(r, cidx) = Complex(re, im);
        }
      // exact Hermitian symmetrisation
      for (int r = 0; r < d; ++r) {
        h(r, r) = Complex(h(r, r).real(), 0.0);
        for (int cidx = r + 1; cidx < d; ++cidx) {
          const Complex mean = 0.5 * (h(r, cidx) + std::conj(h(cidx, r)));
          h(r, cidx) = mean;
          h(cidx, r) = std::conj(mean);
        }
      }
      sol.hermitian_blocks.emplace_back(std::move(h));
    }
    sol.scalar_blocks.assign(sv.out_raw_scalars.begin(), sv.out_raw_scalars.begin() + scalar_count_);
  }
  return sol;
}

}  // namespace povmsim::sdp
