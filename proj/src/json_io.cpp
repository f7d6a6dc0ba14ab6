#include "povmsim/json_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "povmsim/errors.hpp"

namespace povmsim::json_io {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(depth) * indent, ' ');
  const std::string pad_in(static_cast<size_t>(depth + 1) * indent, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(item, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string canonical_dump(const json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      rows.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw ParseError("matrix entry count must equal rows*cols");
  ComplexMatrix m(rows, cols);
  int idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const auto& e = j[idx++];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("matrix entries are [re, im] pairs");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

json povm_to_json(const Povm& m) {
  json j;
  j["dim"] = m.dim;
  json effects = json::array();
  for (const auto& e : m.effects) effects.push_back(matrix_to_json(e.matrix()));
  j["effects"] = std::move(effects);
  return j;
}

Povm povm_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("effects"))
    throw ParseError("POVM documents need 'dim' and 'effects'");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() <= 0)
    throw ParseError("'dim' must be a positive integer");
  Povm m;
  m.dim = j["dim"].get<int>();
  if (!j["effects"].is_array() || j["effects"].empty())
    throw ParseError("'effects' must be a non-empty array");
  for (const auto& e : j["effects"]) {
    ComplexMatrix mat = matrix_from_json(e, m.dim, m.dim);
    try {
      m.effects.emplace_back(std::move(mat), tol);
    } catch (const NonHermitianInput&) {
      throw;
    }
  }
  return validate(m, tol);
}

json post_processing_to_json(const PostProcessing& q) {
  json j;
  j["inputs"] = q.inputs();
  j["outputs"] = q.outputs();
  json rows = json::array();
  for (int r = 0; r < q.inputs(); ++r) {
    json row = json::array();
    for (int c = 0; c < q.outputs(); ++c) row.push_back(q(r, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

json strategy_to_json(const SimulationStrategy& s, int dim) {
  json j;
  j["dim"] = dim;
  j["weights"] = s.weights;
  json members = json::array();
  for (const auto& member : s.members) {
    json effects = json::array();
    for (const auto& e : member.effects) effects.push_back(matrix_to_json(e.matrix()));
    members.push_back(std::move(effects));
  }
  j["members"] = std::move(members);
  if (s.post)
    j["post"] = post_processing_to_json(*s.post);
  else
    j["post"] = nullptr;
  return j;
}

json visibility_to_json(const VisibilityResult& r) {
  json j;
  j["t_star"] = r.t_star;
  j["dim"] = r.dim;
  j["outcomes"] = r.outcomes;
  json parts = json::array();
  for (const auto& part : r.parts) {
    if (part.weight <= 1e-10) continue;
    json p;
    p["support"] = part.support;
    p["weight"] = part.weight;
    p["trace_aligned"] = part.trace_aligned;
    json effects = json::array();
    for (const auto& e : part.effects) effects.push_back(matrix_to_json(e.matrix()));
    p["effects"] = std::move(effects);
    parts.push_back(std::move(p));
  }
  j["parts"] = std::move(parts);
  json diag;
  diag["iterations"] = r.diagnostics.iterations;
  diag["duality_gap"] = r.diagnostics.duality_gap;
  diag["primal_residual"] = r.diagnostics.primal_residual;
  diag["dual_residual"] = r.diagnostics.dual_residual;
  j["diagnostics"] = std::move(diag);
  return j;
}

json dilation_to_json(const Dilation& d) {
  json j;
  j["system_dim"] = d.system_dim;
  j["ancilla_dim"] = d.ancilla_dim;
  json phi = json::array();
  for (const auto& z : d.ancilla_state) phi.push_back(json::array({z.real(), z.imag()}));
  j["ancilla_state"] = std::move(phi);
  j["strategy"] = strategy_to_json(d.strategy, d.system_dim * d.ancilla_dim);
  j["outcome_map"] = post_processing_to_json(d.outcome_map);
  json unitaries = json::array();
  for (const auto& u : d.member_unitaries) unitaries.push_back(matrix_to_json(u));
  j["member_unitaries"] = std::move(unitaries);
  return j;
}

std::string digest_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace povmsim::json_io
