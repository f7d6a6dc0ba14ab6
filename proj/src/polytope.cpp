#include "povmsim/polytope.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"

namespace povmsim::polytope {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Bitset {
  std::vector<uint64_t> words;
  explicit Bitset(int bits = 0) : words((bits + 63) / 64, 0) {}
  void set(int i) { words[i >> 6] |= uint64_t(1) << (i & 63); }
  bool intersect_count_at_least(const Bitset& o, int k) const {
    int c = 0;
    for (size_t w = 0; w < words.size(); ++w) {
      c += __builtin_popcountll(words[w] & o.words[w]);
      if (c >= k) return true;
    }
    return false;
  }
  static bool subset_of_intersection(const Bitset& z, const Bitset& v) {
    // z subseteq v
    for (size_t w = 0; w < z.words.size(); ++w)
      if ((z.words[w] & ~v.words[w]) != 0) return false;
    return true;
  }
  Bitset intersect(const Bitset& o) const {
    Bitset r;
    r.words.resize(words.size());
    for (size_t w = 0; w < words.size(); ++w) r.words[w] = words[w] & o.words[w];
    return r;
  }
};

struct DdVertex {
  std::vector<double> x;
  Bitset active;
};

// Vertex enumeration in a full-dimensional coordinate system: incremental
// halfspace insertion starting from a bounding box, with the standard
// double-description adjacency test (the candidate edge's common active set
// must not be contained in any other vertex's).
std::vector<std::vector<double>> enumerate_core(
    int dim, std::vector<std::pair<std::vector<double>, double>> facets, const Tolerances& tol) {
  if (dim > 10) throw DimensionTooLarge("enumeration guard: dimension > 10");
  if (dim == 0) return {{}};

  // Insertion order: decreasing infinity norm of the raw facet normal.
  std::stable_sort(facets.begin(), facets.end(), [](const auto& f1, const auto& f2) {
    auto inf = [](const std::vector<double>& a) {
      double m = 0.0;
      for (double v : a) m = std::max(m, std::abs(v));
      return m;
    };
    return inf(f1.first) > inf(f2.first);
  });
  for (auto& [a, b] : facets) {
    double norm = 0.0;
    for (double v : a) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= 1e-14) {
      if (b < -1e-12) return {};  // 0 <= negative: empty
      a.assign(dim, 0.0);
      b = 1.0;  // trivially satisfied, keeps indices stable
      continue;
    }
    for (double& v : a) v /= norm;
    b /= norm;
  }

  const int n_facets = static_cast<int>(facets.size());
  const double box = 8.0;
  const int total_bits = n_facets + 2 * dim;

  std::vector<DdVertex> verts;
  verts.reserve(size_t(1) << dim);
  for (uint64_t mask = 0; mask < (uint64_t(1) << dim); ++mask) {
    DdVertex v;
    v.x.resize(dim);
    v.active = Bitset(total_bits);
    for (int c = 0; c < dim; ++c) {
      const bool hi = (mask >> c) & 1;
      v.x[c] = hi ? box : -box;
      v.active.set(n_facets + 2 * c + (hi ? 0 : 1));
    }
    verts.push_back(std::move(v));
  }

  const double act = tol.facet_activity;
  std::vector<double> vals;
  for (int f = 0; f < n_facets; ++f) {
    const auto& [a, b] = facets[f];
    vals.resize(verts.size());
    std::vector<int> ins, outs, ons;
    for (size_t i = 0; i < verts.size(); ++i) {
      double ax = 0.0;
      for (int c = 0; c < dim; ++c) ax += a[c] * verts[i].x[c];
      vals[i] = ax - b;
      const double scale = std::max({1.0, std::abs(ax), std::abs(b)});
      if (vals[i] > act * scale)
        outs.push_back(static_cast<int>(i));
      else if (vals[i] < -act * scale)
        ins.push_back(static_cast<int>(i));
      else
        ons.push_back(static_cast<int>(i));
    }
    if (outs.empty()) {
      for (int i : ons) verts[i].active.set(f);
      continue;
    }
    if (ins.empty() && ons.empty()) return {};

    std::vector<DdVertex> fresh;
    for (int ui : ins)
      for (int wi : outs) {
        const Bitset z = verts[ui].active.intersect(verts[wi].active);
        if (!z.intersect_count_at_least(verts[wi].active, dim - 1)) continue;
        bool edge = true;
        for (size_t vi = 0; vi < verts.size(); ++vi) {
          if (static_cast<int>(vi) == ui || static_cast<int>(vi) == wi) continue;
          if (Bitset::subset_of_intersection(z, verts[vi].active)) {
            edge = false;
            break;
          }
        }
        if (!edge) continue;
        const double s = vals[ui] / (vals[ui] - vals[wi]);  // in (0,1)
        DdVertex nv;
        nv.x.resize(dim);
        for (int c = 0; c < dim; ++c) nv.x[c] = verts[ui].x[c] + s * (verts[wi].x[c] - verts[ui].x[c]);
        fresh.push_back(std::move(nv));
      }

    // Recompute activity of new vertices against everything processed so far.
    for (auto& nv : fresh) {
      nv.active = Bitset(total_bits);
      for (int g = 0; g <= f; ++g) {
        double ax = 0.0;
        for (int c = 0; c < dim; ++c) ax += facets[g].first[c] * nv.x[c];
        const double scale = std::max({1.0, std::abs(ax), std::abs(facets[g].second)});
        if (std::abs(ax - facets[g].second) <= act * scale) nv.active.set(g);
      }
      for (int c = 0; c < dim; ++c) {
        if (std::abs(nv.x[c] - box) <= act * box) nv.active.set(n_facets + 2 * c + 0);
        if (std::abs(nv.x[c] + box) <= act * box) nv.active.set(n_facets + 2 * c + 1);
      }
    }

    std::vector<DdVertex> next;
    next.reserve(ins.size() + ons.size() + fresh.size());
    for (int i : ins) next.push_back(std::move(verts[i]));
    for (int i : ons) {
      verts[i].active.set(f);
      next.push_back(std::move(verts[i]));
    }
    // Consolidate the boundary batch (kept "on" vertices + fresh cuts).
    std::vector<DdVertex> boundary;
    boundary.reserve(fresh.size());
    for (auto& nv : fresh) boundary.push_back(std::move(nv));
    std::sort(boundary.begin(), boundary.end(),
              [](const DdVertex& p, const DdVertex& q) { return p.x < q.x; });
    const double merge = tol.vertex_consolidation;
    std::vector<char> keep(boundary.size(), 1);
    for (size_t i = 0; i < boundary.size(); ++i) {
      for (size_t j = i; j-- > 0;) {
        if (boundary[i].x[0] - boundary[j].x[0] > merge) break;
        if (!keep[j]) continue;
        double dist = 0.0;
        for (int c = 0; c < dim; ++c) dist = std::max(dist, std::abs(boundary[i].x[c] - boundary[j].x[c]));
        if (dist <= merge) {
          keep[i] = 0;
          break;
        }
      }
      if (!keep[i]) continue;
      for (int oi = static_cast<int>(ins.size()); oi < static_cast<int>(ins.size() + ons.size()); ++oi) {
        double dist = 0.0;
        for (int c = 0; c < dim; ++c) dist = std::max(dist, std::abs(boundary[i].x[c] - next[oi].x[c]));
        if (dist <= merge) {
          keep[i] = 0;
          break;
        }
      }
    }
    for (size_t i = 0; i < boundary.size(); ++i)
      if (keep[i]) next.push_back(std::move(boundary[i]));
    verts = std::move(next);
  }

  // Boundedness: nothing may rest on the bounding box.
  for (const auto& v : verts)
    for (int c = 0; c < dim; ++c)
      if (std::abs(std::abs(v.x[c]) - box) <= 1e-6)
        throw Unbounded("recession direction detected at the bounding box");

  std::vector<std::vector<double>> out;
  out.reserve(verts.size());
  for (auto& v : verts) out.push_back(std::move(v.x));
  std::sort(out.begin(), out.end());
  // Global consolidation pass.
  std::vector<std::vector<double>> dedup;
  const double merge = tol.vertex_consolidation;
  for (size_t i = 0; i < out.size(); ++i) {
    bool dup = false;
    for (size_t j = dedup.size(); j-- > 0;) {
      if (out[i][0] - dedup[j][0] > merge) break;
      double dist = 0.0;
      for (int c = 0; c < dim; ++c) dist = std::max(dist, std::abs(out[i][c] - dedup[j][c]));
      if (dist <= merge) {
        dup = true;
        break;
      }
    }
    if (!dup) dedup.push_back(out[i]);
  }
  return dedup;
}

}  // namespace

VRep enumerate_vertices(const HRep& h, const Tolerances& tol) {
  if (h.dimension > 10) throw DimensionTooLarge("enumeration guard: dimension > 10");
  VRep out;
  if (h.equalities.empty()) {
    out.vertices = enumerate_core(h.dimension, h.inequalities, tol);
  } else {
    // Project onto the affine hull of the equalities first.
    const int d = h.dimension;
    const int k = static_cast<int>(h.equalities.size());
    // x0: least-squares solution via the normal equations (pseudo-inverse of
    // the small Gram matrix E E^T).
    ComplexMatrix gram(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += h.equalities[i].first[c] * h.equalities[j].first[c];
        gram(i, j) = Complex(s, 0.0);
      }
    const HermitianOperator ginv = pseudo_inverse(HermitianOperator(gram));
    std::vector<double> alpha(k, 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) alpha[i] += ginv(i, j).real() * h.equalities[j].second;
    std::vector<double> x0(d, 0.0);
    for (int i = 0; i < k; ++i)
      for (int c = 0; c < d; ++c) x0[c] += alpha[i] * h.equalities[i].first[c];
    // Null-space basis of the equality normals.
    ComplexMatrix ete(d, d);
    for (int c1 = 0; c1 < d; ++c1)
      for (int c2 = 0; c2 < d; ++c2) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += h.equalities[i].first[c1] * h.equalities[i].first[c2];
        ete(c1, c2) = Complex(s, 0.0);
      }
    const auto eig = eig_hermitian(HermitianOperator(ete));
    const double top = std::max(1.0, eig.eigenvalues.front());
    std::vector<std::vector<double>> null_basis;
    for (int c = 0; c < d; ++c)
      if (std::abs(eig.eigenvalues[c]) <= 1e-12 * top) {
        std::vector<double> col(d);
        for (int r = 0; r < d; ++r) col[r] = eig.eigenvectors(r, c).real();
        null_basis.push_back(std::move(col));
      }
    // Consistency of the equalities themselves.
    for (int i = 0; i < k; ++i) {
      double ax = 0.0;
      for (int c = 0; c < d; ++c) ax += h.equalities[i].first[c] * x0[c];
      if (std::abs(ax - h.equalities[i].second) > 1e-8)
        throw InvalidArgument("inconsistent equality system");
    }
    const int kd = static_cast<int>(null_basis.size());
    if (kd == 0) {
      for (const auto& [a, b] : h.inequalities) {
        double ax = 0.0;
        for (int c = 0; c < d; ++c) ax += a[c] * x0[c];
        if (ax > b + 1e-9 * std::max(1.0, std::abs(b))) return out;  // empty
      }
      out.vertices.push_back(std::move(x0));
      return out;
    }
    std::vector<std::pair<std::vector<double>, double>> reduced;
    for (const auto& [a, b] : h.inequalities) {
      std::vector<double> ar(kd, 0.0);
      double ax0 = 0.0;
      for (int c = 0; c < d; ++c) ax0 += a[c] * x0[c];
      for (int z = 0; z < kd; ++z)
        for (int c = 0; c < d; ++c) ar[z] += a[c] * null_basis[z][c];
      reduced.emplace_back(std::move(ar), b - ax0);
    }
    const auto zverts = enumerate_core(kd, reduced, tol);
    for (const auto& z : zverts) {
      std::vector<double> x = x0;
      for (int c = 0; c < d; ++c)
        for (int zi = 0; zi < kd; ++zi) x[c] += null_basis[zi][c] * z[zi];
      out.vertices.push_back(std::move(x));
    }
    std::sort(out.vertices.begin(), out.vertices.end());
  }

  // Every vertex must satisfy the full H-representation.
  for (const auto& v : out.vertices) {
    for (const auto& [a, b] : h.inequalities) {
      double ax = 0.0;
      for (int c = 0; c < h.dimension; ++c) ax += a[c] * v[c];
      double norm = 0.0;
      for (double w : a) norm += w * w;
      if (ax - b > 1e-9 * std::max(1.0, std::sqrt(norm) * 8.0 + std::abs(b)))
        throw SolverFailure("enumerated vertex violates a facet");
    }
  }
  return out;
}

HRep build_qubit_polytope(const QubitPolytopeSpec& spec) {
  if (spec.polygon_sides < 3) throw InvalidArgument("polygon needs at least three sides");
  std::vector<std::array<double, 3>> dirs = spec.directions;
  std::vector<std::array<double, 2>> polygon;
  for (int k = 0; k <= spec.polygon_sides; ++k) {
    const double theta = std::numbers::pi * k / spec.polygon_sides;
    polygon.push_back({std::cos(theta), std::sin(theta)});
  }
  if (spec.tangent_to_tetra) {
    // Facet directions pointing at the effects of a rotated tetrahedron.
    dirs.push_back({-0.5, std::sqrt(3.0) / 2.0, 0.0});
    dirs.push_back({-0.5, -std::sqrt(3.0) / 4.0, 0.75});
    dirs.push_back({-0.5, -std::sqrt(3.0) / 4.0, -0.75});
    polygon.push_back({-0.5, std::sqrt(3.0) / 2.0});
  }
  // The directions must span R^3 for the third and fourth effects to be
  // boxed in.
  {
    ComplexMatrix g(3, 3);
    for (const auto& v : dirs)
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g(r, c) += Complex(v[r] * v[c], 0.0);
    if (numerical_rank(HermitianOperator(g), 1e-10) < 3)
      throw DegenerateDirections("facet directions do not span R^3");
  }

  HRep h;
  h.dimension = 8;
  auto add = [&](std::vector<double> a, double b) { h.inequalities.emplace_back(std::move(a), b); };

  // Coordinates: (a1, a2, x2, y2, a3, x3, y3, z3).
  // Fourth effect: a4 = 1 - a1 - a2 - a3, Bloch (-a1 - x2 - x3, -y2 - y3, -z3).
  for (const auto& v : dirs) {
    // third effect: (x3, y3, z3) . v <= a3
    add({0, 0, 0, 0, -1, v[0], v[1], v[2]}, 0.0);
    // fourth effect: a1 (1 - v_x) + a2 + a3 - x2 v_x - y2 v_y - x3 v_x - y3 v_y - z3 v_z <= 1
    add({1.0 - v[0], 1.0, -v[0], -v[1], 1.0, -v[0], -v[1], -v[2]}, 1.0);
  }
  for (const auto& w : polygon) add({0, -1, w[0], w[1], 0, 0, 0, 0}, 0.0);
  add({0, 0, 0, -1, 0, 0, 0, 0}, 0.0);  // y2 >= 0
  add({-1, 0, 0, 0, 0, 0, 0, 0}, 0.0);  // a1 >= 0
  add({0, -1, 0, 0, 0, 0, 0, 0}, 0.0);  // a2 >= 0
  add({0, 0, 0, 0, -1, 0, 0, 0}, 0.0);  // a3 >= 0
  add({1, 1, 0, 0, 1, 0, 0, 0}, 1.0);   // a4 >= 0
  return h;
}

QuasiPovm vertex_to_quasipovm(const std::vector<double>& v) {
  if (v.size() != 8) throw ShapeMismatch("reduced qubit coordinates have eight entries");
  QuasiPovm q;
  q.dim = 2;
  const double a1 = v[0], a2 = v[1], x2 = v[2], y2 = v[3];
  const double a3 = v[4], x3 = v[5], y3 = v[6], z3 = v[7];
  q.effects.push_back(fixtures::qubit_effect(a1, a1, 0.0, 0.0));
  q.effects.push_back(fixtures::qubit_effect(a2, x2, y2, 0.0));
  q.effects.push_back(fixtures::qubit_effect(a3, x3, y3, z3));
  q.effects.push_back(
      fixtures::qubit_effect(1.0 - a1 - a2 - a3, -a1 - x2 - x3, -y2 - y3, -z3));
  return q;
}

namespace {

struct Bloch {
  double alpha;
  std::array<double, 3> r;
};

Bloch to_bloch(const HermitianOperator& e) {
  Bloch b;
  b.alpha = 0.5 * (e(0, 0).real() + e(1, 1).real());
  b.r = {e(1, 0).real(), e(1, 0).imag(), 0.5 * (e(0, 0).real() - e(1, 1).real())};
  return b;
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void rotate_all(std::vector<Bloch>& v, const std::array<std::array<double, 3>, 3>& rot) {
  for (auto& b : v) {
    std::array<double, 3> nr{};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) nr[r] += rot[r][c] * b.r[c];
    b.r = nr;
  }
}

}  // namespace

std::vector<double> encode_reduced(const Povm& m) {
  if (m.dim != 2 || m.outcomes() != 4)
    throw InvalidArgument("the reduced encoding expects a four-outcome qubit POVM");
  std::vector<Bloch> b;
  for (const auto& e : m.effects) b.push_back(to_bloch(e));

  const double len1 = std::sqrt(b[0].r[0] * b[0].r[0] + b[0].r[1] * b[0].r[1] + b[0].r[2] * b[0].r[2]);
  if (std::abs(len1 - b[0].alpha) > 1e-8)
    throw InvalidArgument("first effect must be rank one for the reduced encoding");
  if (len1 > 1e-12) {
    // Rodrigues rotation taking r1 onto +x.
    const std::array<double, 3> from = {b[0].r[0] / len1, b[0].r[1] / len1, b[0].r[2] / len1};
    const std::array<double, 3> to = {1.0, 0.0, 0.0};
    const auto axis = cross(from, to);
    const double sin_a = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    const double cos_a = from[0];
    if (sin_a > 1e-14) {
      const std::array<double, 3> u = {axis[0] / sin_a, axis[1] / sin_a, axis[2] / sin_a};
      std::array<std::array<double, 3>, 3> rot;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          const double eps = (r == c) ? cos_a : 0.0;
          rot[r][c] = eps + (1.0 - cos_a) * u[r] * u[c];
        }
      rot[0][1] -= sin_a * u[2];
      rot[0][2] += sin_a * u[1];
      rot[1][0] += sin_a * u[2];
      rot[1][2] -= sin_a * u[0];
      rot[2][0] -= sin_a * u[1];
      rot[2][1] += sin_a * u[0];
      rotate_all(b, rot);
    } else if (cos_a < 0.0) {
      // Antipodal: rotate by pi about z.
      rotate_all(b, {{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}});
    }
  }
  // Rotate about x so the second Bloch vector lies in the upper xy plane.
  const double phi = std::atan2(b[1].r[2], b[1].r[1]);
  const double c = std::cos(-phi), s = std::sin(-phi);
  rotate_all(b, {{{1, 0, 0}, {0, c, -s}, {0, s, c}}});

  return {b[0].alpha, b[1].alpha, b[1].r[0], b[1].r[1], b[2].alpha, b[2].r[0], b[2].r[1], b[2].r[2]};
}

ScanResult scan_vertices(const VRep& v, int jobs, const sdp::SolverOptions& opts) {
  ScanResult out;
  out.vertex_count = static_cast<int>(v.vertices.size());
  out.per_vertex_t.assign(v.vertices.size(), 1.0);
  const auto start = Clock::now();

  VisibilityOptions vopts;
  vopts.solver = opts;
  vopts.check_certificate = false;  // only the optimal value is consumed here
  std::exception_ptr failure;
  auto kernel = [&](size_t i) {
    try {
      const QuasiPovm q = vertex_to_quasipovm(v.vertices[i]);
      out.per_vertex_t[i] = visibility_m_outcome(q.dim, q.effects, 2, vopts).t_star;
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
    for (long long i = 0; i < static_cast<long long>(v.vertices.size()); ++i)
      kernel(static_cast<size_t>(i));
#else
    for (size_t i = 0; i < v.vertices.size(); ++i) kernel(i);
#endif
  } else {
    for (size_t i = 0; i < v.vertices.size(); ++i) kernel(i);
  }
  if (failure) std::rethrow_exception(failure);

  // Deterministic reduction: minimum by value, lexicographic tie-break.
  int best = -1;
  for (size_t i = 0; i < v.vertices.size(); ++i) {
    if (best < 0 || out.per_vertex_t[i] < out.per_vertex_t[best] ||
        (out.per_vertex_t[i] == out.per_vertex_t[best] && v.vertices[i] < v.vertices[best]))
      best = static_cast<int>(i);
  }
  if (best >= 0) {
    out.t_delta = out.per_vertex_t[best];
    out.argmin_vertex = v.vertices[best];
  }
  out.scan_seconds = seconds_since(start);
  return out;
}

ScanResult scan_lower_bound(const HRep& h, int jobs, const sdp::SolverOptions& opts) {
  const auto start = Clock::now();
  const VRep v = enumerate_vertices(h);
  const double enum_s = seconds_since(start);
  ScanResult out = scan_vertices(v, jobs, opts);
  out.enumeration_seconds = enum_s;
  return out;
}

double werner_bound(double t, double p_star) {
  if (t < 0.0 || t > 1.0 || p_star < 0.0 || p_star > 1.0)
    throw InvalidArgument("werner bound arguments must lie in [0,1]");
  return t * t * p_star;
}

std::vector<std::array<double, 3>> octahedron_directions() {
  return {{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
}

namespace {

void push_normalized(std::vector<std::array<double, 3>>& out, double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  out.push_back({x / n, y / n, z / n});
}

void push_cyclic_signs(std::vector<std::array<double, 3>>& out, double a, double b, double c) {
  const double vals[3] = {a, b, c};
  for (int rot = 0; rot < 3; ++rot) {
    const double x = vals[rot % 3], y = vals[(rot + 1) % 3], z = vals[(rot + 2) % 3];
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2)
        for (int sz = -1; sz <= 1; sz += 2) {
          const std::array<double, 3> cand = {sx * x, sy * y, sz * z};
          if (cand[0] == 0.0 && sx < 0) continue;
          bool dup = false;
          const double n = std::sqrt(cand[0] * cand[0] + cand[1] * cand[1] + cand[2] * cand[2]);
          const std::array<double, 3> unit = {cand[0] / n, cand[1] / n, cand[2] / n};
          for (const auto& have : out) {
            if (std::abs(have[0] - unit[0]) < 1e-12 && std::abs(have[1] - unit[1]) < 1e-12 &&
                std::abs(have[2] - unit[2]) < 1e-12) {
              dup = true;
              break;
            }
          }
          if (!dup) out.push_back(unit);
        }
  }
}

std::vector<std::array<double, 3>> icosahedron_vertices() {
  std::vector<std::array<double, 3>> out;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  push_cyclic_signs(out, 0.0, 1.0, phi);
  return out;
}

std::vector<std::array<double, 3>> dodecahedron_vertices() {
  std::vector<std::array<double, 3>> out;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int sx = -1; sx <= 1; sx += 2)
    for (int sy = -1; sy <= 1; sy += 2)
      for (int sz = -1; sz <= 1; sz += 2) push_normalized(out, sx * 1.0, sy * 1.0, sz * 1.0);
  push_cyclic_signs(out, 0.0, 1.0 / phi, phi);
  return out;
}

}  // namespace

std::vector<std::array<double, 3>> icosahedron_with_dual_directions() {
  auto out = icosahedron_vertices();
  for (const auto& v : dodecahedron_vertices()) out.push_back(v);
  return out;
}

std::vector<std::array<double, 3>> truncated_icosahedron_with_dual_directions() {
  std::vector<std::array<double, 3>> out;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  push_cyclic_signs(out, 0.0, 1.0, 3.0 * phi);
  push_cyclic_signs(out, 1.0, 2.0 + phi, 2.0 * phi);
  push_cyclic_signs(out, phi, 2.0, 2.0 * phi + 1.0);
  // Dual face directions: pentagon centres (icosahedron vertices) and
  // hexagon centres (dodecahedron vertices).
  for (const auto& v : icosahedron_vertices()) out.push_back(v);
  for (const auto& v : dodecahedron_vertices()) out.push_back(v);
  return out;
}

QubitPolytopeSpec preset(const std::string& name) {
  QubitPolytopeSpec spec;
  if (name == "octahedron") {
    spec.directions = octahedron_directions();
    spec.polygon_sides = 4;
    spec.tangent_to_tetra = false;
  } else if (name == "icosahedron") {
    spec.directions = icosahedron_with_dual_directions();
    spec.polygon_sides = 20;
    spec.tangent_to_tetra = true;
  } else if (name == "paper") {
    spec.directions = truncated_icosahedron_with_dual_directions();
    spec.polygon_sides = 100;
    spec.tangent_to_tetra = true;
  } else {
    throw InvalidArgument("unknown polytope preset: " + name);
  }
  return spec;
}

}  // namespace povmsim::polytope
