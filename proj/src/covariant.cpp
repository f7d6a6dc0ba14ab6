#include "povmsim/covariant.hpp"

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/simulability.hpp"

namespace povmsim {

namespace {

// Orthonormal traceless Hermitian basis of 3x3 operators (Gell-Mann
// matrices scaled to unit Hilbert-Schmidt norm).
std::vector<HermitianOperator> gell_mann_basis() {
  std::vector<ComplexMatrix> raw;
  auto sym = [&](int p, int q) {
    ComplexMatrix m(3, 3);
    m(p, q) = 1.0;
    m(q, p) = 1.0;
    return m;
  };
  auto asym = [&](int p, int q) {
    ComplexMatrix m(3, 3);
    m(p, q) = Complex(0.0, -1.0);
    m(q, p) = Complex(0.0, 1.0);
    return m;
  };
  raw.push_back(sym(0, 1));
  raw.push_back(asym(0, 1));
  {
    ComplexMatrix m(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    raw.push_back(m);
  }
  raw.push_back(sym(0, 2));
  raw.push_back(asym(0, 2));
  raw.push_back(sym(1, 2));
  raw.push_back(asym(1, 2));
  {
    ComplexMatrix m(3, 3);
    const double s = 1.0 / std::sqrt(3.0);
    m(0, 0) = s;
    m(1, 1) = s;
    m(2, 2) = -2.0 * s;
    raw.push_back(m);
  }
  std::vector<HermitianOperator> basis;
  for (auto& m : raw) {
    const double norm = m.frobenius();
    m *= Complex(1.0 / norm, 0.0);
    basis.emplace_back(std::move(m));
  }
  return basis;
}

}  // namespace

CovariantSearchResult covariant_search(int seeds, uint64_t rng_seed, int jobs,
                                       const sdp::SolverOptions& opts, int descent_steps) {
  if (seeds < 1) throw InvalidArgument("need at least one seed");
  std::mt19937_64 rng(rng_seed);
  std::vector<std::vector<Complex>> fiducials;
  fiducials.reserve(seeds);
  for (int s = 0; s < seeds; ++s) fiducials.push_back(fixtures::random_pure_state(3, rng));

  CovariantSearchResult out;
  out.samples.assign(seeds, {});
  std::vector<Povm> povms(seeds);

  VisibilityOptions vopts;
  vopts.solver = opts;
  std::exception_ptr failure;
  auto kernel = [&](int s) {
    try {
      ComplexMatrix seed_matrix = outer(fiducials[s], fiducials[s]);
      seed_matrix *= Complex(1.0 / 3.0, 0.0);
      povms[s] = fixtures::covariant_qutrit(HermitianOperator(std::move(seed_matrix)));
      out.samples[s].t = visibility_qutrit_projective(povms[s], vopts).t_star;
      out.samples[s].t3 = visibility_m_outcome(povms[s], 3, vopts).t_star;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int s = 0; s < seeds; ++s) kernel(s);
#else
    for (int s = 0; s < seeds; ++s) kernel(s);
#endif
  } else {
    for (int s = 0; s < seeds; ++s) kernel(s);
  }
  if (failure) std::rethrow_exception(failure);

  for (int s = 0; s < seeds; ++s) {
    if (out.best_index < 0 || out.samples[s].t < out.best_t) {
      out.best_t = out.samples[s].t;
      out.best_index = s;
    }
  }
  out.best = povms[out.best_index];

  // Stochastic descent around the best fiducial: perturb, renormalise,
  // re-evaluate; the step size shrinks whenever progress stalls.
  if (descent_steps > 0) {
    std::vector<Complex> current = fiducials[out.best_index];
    std::normal_distribution<double> gauss(0.0, 1.0);
    double step = 0.3;
    int stall = 0;
    for (int k = 0; k < descent_steps; ++k) {
      std::vector<Complex> candidate = current;
      double norm = 0.0;
      for (auto& z : candidate) {
        z += step * Complex(gauss(rng), gauss(rng));
        norm += std::norm(z);
      }
      norm = std::sqrt(norm);
      for (auto& z : candidate) z /= norm;
      ComplexMatrix seed_matrix = outer(candidate, candidate);
      seed_matrix *= Complex(1.0 / 3.0, 0.0);
      const Povm povm = fixtures::covariant_qutrit(HermitianOperator(std::move(seed_matrix)));
      CovariantSample sample;
      sample.t = visibility_qutrit_projective(povm, vopts).t_star;
      sample.t3 = visibility_m_outcome(povm, 3, vopts).t_star;
      out.samples.push_back(sample);
      if (sample.t < out.best_t) {
        out.best_t = sample.t;
        out.best_index = static_cast<int>(out.samples.size()) - 1;
        out.best = povm;
        current = candidate;
        stall = 0;
      } else if (++stall >= 4) {
        step *= 0.6;
        stall = 0;
      }
    }
  }
  return out;
}

polytope::HRep build_covariant_qutrit_polytope(int num_states, uint64_t rng_seed) {
  if (num_states < 9) throw InvalidArgument("need at least nine pure-state facets");
  std::mt19937_64 rng(rng_seed);
  const auto basis = gell_mann_basis();
  polytope::HRep h;
  h.dimension = 8;
  for (int s = 0; s < num_states; ++s) {
    const auto phi = fixtures::random_pure_state(3, rng);
    const ComplexMatrix proj = outer(phi, phi);
    std::vector<double> a(8);
    for (int k = 0; k < 8; ++k) a[k] = -inner_product(basis[k].matrix(), proj).real();
    h.inequalities.emplace_back(std::move(a), 1.0 / 9.0);
  }
  return h;
}

HermitianOperator covariant_vertex_to_seed(const std::vector<double>& v) {
  if (v.size() != 8) throw ShapeMismatch("covariant seed coordinates have eight entries");
  const auto basis = gell_mann_basis();
  ComplexMatrix m = ComplexMatrix::identity(3);
  m *= Complex(1.0 / 9.0, 0.0);
  for (int k = 0; k < 8; ++k) {
    ComplexMatrix term = basis[k].matrix();
    term *= Complex(v[k], 0.0);
    m += term;
  }
  return HermitianOperator(std::move(m));
}

CovariantBoundResult scan_covariant_lower_bound(const polytope::HRep& h, int jobs,
                                                const sdp::SolverOptions& opts) {
  const polytope::VRep verts = polytope::enumerate_vertices(h);
  CovariantBoundResult out;
  out.vertex_count = static_cast<int>(verts.vertices.size());
  std::vector<double> per_vertex(verts.vertices.size(), 1.0);

  VisibilityOptions vopts;
  vopts.solver = opts;
  vopts.check_certificate = false;
  std::exception_ptr failure;
  auto kernel = [&](size_t i) {
    try {
      const HermitianOperator seed = covariant_vertex_to_seed(verts.vertices[i]);
      std::vector<HermitianOperator> effects;
      effects.reserve(9);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const ComplexMatrix d = fixtures::weyl_displacement(j, k, 3);
          effects.emplace_back(d * seed.matrix() * d.adjoint());
        }
      per_vertex[i] = visibility_qutrit_projective(effects, vopts).t_star;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(verts.vertices.size()); ++i)
      kernel(static_cast<size_t>(i));
#else
    for (size_t i = 0; i < verts.vertices.size(); ++i) kernel(i);
#endif
  } else {
    for (size_t i = 0; i < verts.vertices.size(); ++i) kernel(i);
  }
  if (failure) std::rethrow_exception(failure);

  int best = -1;
  for (size_t i = 0; i < verts.vertices.size(); ++i) {
    if (best < 0 || per_vertex[i] < per_vertex[best] ||
        (per_vertex[i] == per_vertex[best] && verts.vertices[i] < verts.vertices[best]))
      best = static_cast<int>(i);
  }
  if (best >= 0) {
    out.t_lower = per_vertex[best];
    out.argmin_vertex = verts.vertices[best];
  }
  return out;
}

}  // namespace povmsim
