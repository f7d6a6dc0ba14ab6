#include "povmsim/sdp.hpp"

#include <cmath>
#include <ostream>

#include "povmsim/errors.hpp"

namespace povmsim::sdp {

ComplexMatrix embed_hermitian(const HermitianOperator& h) {
  const int d = h.dim();
  ComplexMatrix m(2 * d, 2 * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const Complex z = h(r, c);
      m(r, c) = Complex(z.real(), 0.0);
      m(d + r, d + c) = Complex(z.real(), 0.0);
      m(r, d + c) = Complex(-z.imag(), 0.0);
      m(d + r, c) = Complex(z.imag(), 0.0);
    }
  return m;
}

namespace {

// Dense embedded coefficient for the functional X -> <F, X> on a Hermitian
// block: embed(F)/2, so that the real-space inner product reproduces the
// complex Hilbert-Schmidt value exactly.
std::vector<double> embedded_coeff(const HermitianOperator& f) {
  const int d = f.dim();
  const int n = 2 * d;
  std::vector<double> e(n * n, 0.0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const Complex z = f(r, c);
      e[r * n + c] = 0.5 * z.real();
      e[(d + r) * n + (d + c)] = 0.5 * z.real();
      e[r * n + (d + c)] = -0.5 * z.imag();
      e[(d + r) * n + c] = 0.5 * z.imag();
    }
  return e;
}

}  // namespace

int SdpProblem::add_hermitian_block(int dim) {
  if (dim <= 0) throw IllFormedProblem("block dimension must be positive");
  hermitian_dims_.push_back(dim);
  return static_cast<int>(hermitian_dims_.size()) - 1;
}

int SdpProblem::add_scalar_block() { return scalar_count_++; }

int SdpProblem::add_scalar_block_bounded(double upper_bound) {
  if (upper_bound <= 0.0) throw IllFormedProblem("scalar upper bound must be positive");
  const int id = scalar_count_++;
  scalar_bounds_.emplace_back(id, upper_bound);
  return id;
}

void SdpProblem::objective_scalar(int scalar_id, double coeff) {
  if (scalar_id < 0 || scalar_id >= scalar_count_) throw IllFormedProblem("unknown scalar block");
  obj_scalar_.push_back({scalar_id, coeff});
}

void SdpProblem::objective_matrix(int block_id, const HermitianOperator& c) {
  if (block_id < 0 || block_id >= static_cast<int>(hermitian_dims_.size()))
    throw IllFormedProblem("unknown hermitian block");
  if (c.dim() != hermitian_dims_[block_id]) throw IllFormedProblem("objective coefficient dimension mismatch");
  obj_matrix_.push_back({block_id, embedded_coeff(c)});
}

int SdpProblem::add_equality(double rhs, int group) {
  equalities_.push_back({rhs, group, {}, {}});
  return static_cast<int>(equalities_.size()) - 1;
}

void SdpProblem::equality_scalar_term(int eq, int scalar_id, double coeff) {
  if (scalar_id < 0 || scalar_id >= scalar_count_) throw IllFormedProblem("unknown scalar block");
  equalities_[eq].scalar_terms.push_back({scalar_id, coeff});
}

void SdpProblem::equality_matrix_term(int eq, int block_id, const HermitianOperator& f) {
  if (block_id < 0 || block_id >= static_cast<int>(hermitian_dims_.size()))
    throw IllFormedProblem("unknown hermitian block");
  if (f.dim() != hermitian_dims_[block_id]) throw IllFormedProblem("equality coefficient dimension mismatch");
  equalities_[eq].matrix_terms.push_back({block_id, embedded_coeff(f)});
}

void SdpProblem::add_matrix_equality(std::span<const std::pair<int, double>> blocks,
                                     std::span<const std::pair<int, HermitianOperator>> scalar_coeffs,
                                     const HermitianOperator& rhs, int group) {
  const int d = rhs.dim();
  // One real equation per Hermitian coordinate: diagonal entries, then the
  // real and imaginary parts of each upper off-diagonal entry.
  for (int p = 0; p < d; ++p)
    for (int q = p; q < d; ++q)
      for (int part = 0; part < (p == q ? 1 : 2); ++part) {
        ComplexMatrix g(d, d);
        double rhs_value;
        if (p == q) {
          g(p, p) = 1.0;
          rhs_value = rhs(p, p).real();
        } else if (part == 0) {
          g(p, q) = 0.5;
          g(q, p) = 0.5;
          rhs_value = rhs(p, q).real();
        } else {
          g(p, q) = Complex(0.0, 0.5);
          g(q, p) = Complex(0.0, -0.5);
          rhs_value = rhs(p, q).imag();
        }
        const HermitianOperator basis(std::move(g));
        const int eq = add_equality(rhs_value, group);
        for (const auto& [block, coeff] : blocks) {
          if (coeff == 0.0) continue;
          HermitianOperator scaled = basis;
          scaled *= coeff;
          equality_matrix_term(eq, block, scaled);
        }
        for (const auto& [scalar, op] : scalar_coeffs) {
          double v;
          if (p == q)
            v = op(p, p).real();
          else if (part == 0)
            v = op(p, q).real();
          else
            v = op(p, q).imag();
          if (v != 0.0) equality_scalar_term(eq, scalar, v);
        }
      }
}

void SdpProblem::dump(std::ostream& os) const {
  os << "SDPDUMP v1\n";
  os << "maximize\n";
  for (size_t b = 0; b < hermitian_dims_.size(); ++b)
    os << "block " << b << " hermitian " << hermitian_dims_[b] << "\n";
  for (int s = 0; s < scalar_count_; ++s) os << "block " << hermitian_dims_.size() + s << " scalar\n";
  for (const auto& [id, ub] : scalar_bounds_)
    os << "bound " << hermitian_dims_.size() + id << " " << ub << "\n";
  const auto emit_terms = [&](const std::string& tag, const std::vector<MatrixTerm>& mts,
                              const std::vector<ScalarTerm>& sts) {
    for (const auto& mt : mts) {
      const int n = 2 * hermitian_dims_[mt.block];
      // Rows of the embedded coefficient; only the leading Re/Im entries are
      // reported, which determine the Hermitian coefficient fully.
      const int d = hermitian_dims_[mt.block];
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          const double re = 2.0 * mt.coeff[r * n + c];
          const double im = 2.0 * mt.coeff[(d + r) * n + c];
          if (re != 0.0 || im != 0.0)
            os << tag << " " << mt.block << " " << r << " " << c << " " << re << " " << im << "\n";
        }
    }
    for (const auto& st : sts)
      os << tag << " " << hermitian_dims_.size() + st.scalar << " 0 0 " << st.coeff << " 0\n";
  };
  emit_terms("obj", obj_matrix_, obj_scalar_);
  for (size_t k = 0; k < equalities_.size(); ++k) {
    os << "eq " << k << " " << equalities_[k].rhs << "\n";
    emit_terms("coef " + std::to_string(k), equalities_[k].matrix_terms, equalities_[k].scalar_terms);
  }
}

}  // namespace povmsim::sdp
