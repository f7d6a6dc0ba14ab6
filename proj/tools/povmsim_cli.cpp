#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "povmsim/covariant.hpp"
#include "povmsim/decompose.hpp"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/json_io.hpp"
#include "povmsim/naimark.hpp"
#include "povmsim/polytope.hpp"
#include "povmsim/protocols.hpp"
#include "povmsim/simulability.hpp"

using namespace povmsim;
using json = nlohmann::json;

namespace {

struct Cli {
  Tolerances tol;
  sdp::SolverOptions solver;
  uint64_t seed = 1;
  int jobs = 1;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON input");
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << content;
}

void emit_report(const std::string& command, const std::optional<std::string>& digest, json result,
                 json diagnostics, double wall_seconds) {
  json report;
  report["command"] = command;
  if (digest)
    report["input_digest"] = *digest;
  else
    report["input_digest"] = nullptr;
  report["result"] = std::move(result);
  report["diagnostics"] = std::move(diagnostics);
  report["wall_time_s"] = wall_seconds;
  std::cout << json_io::canonical_dump(report);
}

json diag_json(const SolverDiagnostics& d) {
  json j;
  j["iterations"] = d.iterations;
  j["duality_gap"] = d.duality_gap;
  j["primal_residual"] = d.primal_residual;
  j["dual_residual"] = d.dual_residual;
  return j;
}

Povm fixture_by_name(const std::string& name, uint64_t seed) {
  if (name == "tetra") return fixtures::tetra();
  if (name == "trine") return fixtures::trine();
  if (name == "modified-trine") return fixtures::modified_trine();
  if (name == "double-tetra") return fixtures::double_tetra();
  if (name.rfind("covariant:", 0) == 0) {
    const std::string spec = name.substr(10);
    if (spec == "identity") {
      ComplexMatrix m = ComplexMatrix::identity(3);
      m *= Complex(1.0 / 9.0, 0.0);
      return fixtures::covariant_qutrit(HermitianOperator(std::move(m)));
    }
    if (spec == "fiducial") {
      ComplexMatrix m(3, 3);
      m(0, 0) = Complex(1.0 / 3.0, 0.0);
      return fixtures::covariant_qutrit(HermitianOperator(std::move(m)));
    }
    if (spec.rfind("random", 0) == 0) {
      std::mt19937_64 rng(seed);
      const auto phi = fixtures::random_pure_state(3, rng);
      ComplexMatrix m = outer(phi, phi);
      m *= Complex(1.0 / 3.0, 0.0);
      return fixtures::covariant_qutrit(HermitianOperator(std::move(m)));
    }
    throw InvalidArgument("unknown covariant seed spec: " + spec);
  }
  throw InvalidArgument("unknown fixture: " + name);
}

int run(int argc, char** argv) {
  CLI::App app{"POVM simulability toolbox: visibilities, simulation strategies, dilations and polytope bounds"};
  app.require_subcommand(1);

  Cli cli;
  std::string config_path;
  app.add_option("--seed", cli.seed, "random seed for stochastic commands");
  app.add_option("--config", config_path, "JSON file with tolerance overrides");
  app.add_option("--tol-hermiticity", cli.tol.hermiticity, "hermiticity tolerance");
  app.add_option("--tol-psd", cli.tol.psd, "positive semidefiniteness tolerance");
  app.add_option("--tol-orthonormality", cli.tol.orthonormality, "orthonormality tolerance");
  app.add_option("--tol-normalization", cli.tol.povm_normalization, "sum-to-identity tolerance");
  app.add_option("--tol-sdp-gap", cli.solver.gap_tol, "solver duality-gap tolerance");
  app.add_option("--tol-sdp-feas", cli.solver.feas_tol, "solver feasibility tolerance");

  // validate
  auto* c_validate = app.add_subcommand("validate", "check a POVM file against the model invariants");
  std::string in_path;
  c_validate->add_option("povm", in_path, "POVM JSON file (- for stdin)")->required();

  // visibility
  auto* c_vis = app.add_subcommand("visibility", "critical visibility for m-outcome simulability");
  int m_outcomes = 2;
  std::string cert_path;
  c_vis->add_option("povm", in_path, "POVM JSON file (- for stdin)")->required();
  c_vis->add_option("--m", m_outcomes, "sub-measurement outcome count")->required();
  c_vis->add_option("--certificate", cert_path, "write the decomposition certificate to this file");

  // qutrit-visibility
  auto* c_qv = app.add_subcommand("qutrit-visibility", "critical visibility for projective simulability (d=3)");
  std::string strategy_path;
  c_qv->add_option("povm", in_path, "POVM JSON file (- for stdin)")->required();
  c_qv->add_option("--strategy", strategy_path, "write the extracted strategy to this file");

  // simulate
  auto* c_sim = app.add_subcommand("simulate", "projective simulation strategy at a fixed visibility");
  double sim_t = 1.0;
  std::string sim_out;
  c_sim->add_option("povm", in_path, "POVM JSON file (- for stdin)")->required();
  c_sim->add_option("--t", sim_t, "visibility of the depolarised target")->required();
  c_sim->add_option("--out", sim_out, "write the strategy JSON to this file");

  // decompose
  auto* c_dec = app.add_subcommand("decompose", "decompose a POVM into extremal members");
  bool trace_one = false;
  c_dec->add_option("povm", in_path, "POVM JSON file (- for stdin)")->required();
  c_dec->add_flag("--trace-one-qutrit", trace_one, "use the projective trace-one qutrit decomposition");

  // naimark
  auto* c_nai = app.add_subcommand("naimark", "generalised Naimark dilation onto system + ancilla");
  std::string nai_out;
  c_nai->add_option("povm", in_path, "POVM JSON file (- for stdin)")->required();
  c_nai->add_option("--out", nai_out, "write the dilation JSON to this file");

  // polytope-bound
  auto* c_poly = app.add_subcommand("polytope-bound", "outer-polytope lower bound on the critical visibility");
  std::string preset_name, poly_config, csv_path;
  int cov_states = 24;
  c_poly->add_option("--preset", preset_name,
                     "octahedron | icosahedron | paper | covariant-qutrit");
  c_poly->add_option("--config", poly_config, "polytope spec JSON file");
  c_poly->add_option("--jobs", cli.jobs, "worker count for the vertex scan");
  c_poly->add_option("--vertex-csv", csv_path, "write per-vertex visibilities as CSV");
  c_poly->add_option("--states", cov_states, "pure-state facet count (covariant-qutrit preset)");

  // covariant-search
  auto* c_cov = app.add_subcommand("covariant-search", "heuristic search over covariant qutrit POVMs");
  int samples = 200;
  int descent = 60;
  c_cov->add_option("--samples", samples, "number of random seeds")->required();
  c_cov->add_option("--descent", descent, "extra descent seeds around the best sample");
  c_cov->add_option("--jobs", cli.jobs, "worker count");

  // werner-bound
  auto* c_wer = app.add_subcommand("werner-bound", "Werner-state locality bound t^2 * p_star");
  double wt = 0.0, wp = 0.0;
  c_wer->add_option("--t", wt, "measurement visibility")->required();
  c_wer->add_option("--p-star", wp, "projective-measurement critical noise")->required();

  // fixture
  auto* c_fix = app.add_subcommand("fixture", "emit a built-in POVM as canonical JSON");
  std::string fixture_name;
  c_fix->add_option("name", fixture_name,
                    "tetra | trine | modified-trine | double-tetra | covariant:<identity|fiducial|random>")
      ->required();

  app.parse(argc, argv);

  if (!config_path.empty()) {
    const json cfg = parse_json(read_input(config_path));
    if (cfg.contains("tolerances")) {
      const auto& t = cfg["tolerances"];
      if (t.contains("hermiticity")) cli.tol.hermiticity = t["hermiticity"].get<double>();
      if (t.contains("psd")) cli.tol.psd = t["psd"].get<double>();
      if (t.contains("orthonormality")) cli.tol.orthonormality = t["orthonormality"].get<double>();
      if (t.contains("normalization")) cli.tol.povm_normalization = t["normalization"].get<double>();
      if (t.contains("sdp_gap")) cli.solver.gap_tol = t["sdp_gap"].get<double>();
      if (t.contains("sdp_feas")) cli.solver.feas_tol = t["sdp_feas"].get<double>();
    }
  }

  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  VisibilityOptions vopts;
  vopts.solver = cli.solver;

  if (*c_fix) {
    const Povm m = fixture_by_name(fixture_name, cli.seed);
    std::cout << json_io::canonical_dump(json_io::povm_to_json(m));
    return 0;
  }
  if (*c_wer) {
    json result;
    result["t"] = wt;
    result["p_star"] = wp;
    result["bound"] = polytope::werner_bound(wt, wp);
    emit_report("werner-bound", std::nullopt, result, nullptr, elapsed());
    return 0;
  }
  if (*c_cov) {
    const auto res = covariant_search(samples, cli.seed, cli.jobs, polytope::scan_solver_defaults(),
                                      descent);
    json result;
    result["samples"] = samples;
    result["descent"] = descent;
    result["seed"] = cli.seed;
    result["best_t"] = res.best_t;
    result["best_index"] = res.best_index;
    result["best_povm"] = json_io::povm_to_json(res.best);
    json per = json::array();
    double max_gap = 0.0;
    for (const auto& s : res.samples) {
      per.push_back(json::array({s.t, s.t3}));
      max_gap = std::max(max_gap, std::abs(s.t - s.t3));
    }
    result["per_sample_t_t3"] = std::move(per);
    result["max_t_t3_gap"] = max_gap;
    emit_report("covariant-search", std::nullopt, result, nullptr, elapsed());
    return 0;
  }
  if (*c_poly) {
    if (preset_name == "covariant-qutrit") {
      const auto h = build_covariant_qutrit_polytope(cov_states, cli.seed);
      const auto res = scan_covariant_lower_bound(h, cli.jobs, cli.solver);
      json result;
      result["preset"] = preset_name;
      result["states"] = cov_states;
      result["seed"] = cli.seed;
      result["vertices"] = res.vertex_count;
      result["t_lower"] = res.t_lower;
      result["argmin_vertex"] = res.argmin_vertex;
      emit_report("polytope-bound", std::nullopt, result, nullptr, elapsed());
      return 0;
    }
    polytope::QubitPolytopeSpec spec;
    if (!preset_name.empty()) {
      spec = polytope::preset(preset_name);
    } else if (!poly_config.empty()) {
      const json cfg = parse_json(read_input(poly_config));
      if (cfg.contains("preset_directions")) {
        spec = polytope::preset(cfg["preset_directions"].get<std::string>());
      } else if (cfg.contains("directions")) {
        for (const auto& d : cfg["directions"])
          spec.directions.push_back({d[0].get<double>(), d[1].get<double>(), d[2].get<double>()});
      } else {
        throw InvalidArgument("polytope config needs 'directions' or 'preset_directions'");
      }
      if (cfg.contains("polygon_sides")) spec.polygon_sides = cfg["polygon_sides"].get<int>();
      if (cfg.contains("tangent_to_tetra")) spec.tangent_to_tetra = cfg["tangent_to_tetra"].get<bool>();
    } else {
      throw InvalidArgument("polytope-bound needs --preset or --config");
    }
    const auto h = polytope::build_qubit_polytope(spec);
    const auto res = polytope::scan_lower_bound(h, cli.jobs, cli.solver);
    if (!csv_path.empty()) {
      std::ostringstream csv;
      csv << "index,t\n";
      for (size_t i = 0; i < res.per_vertex_t.size(); ++i) csv << i << "," << res.per_vertex_t[i] << "\n";
      write_file(csv_path, csv.str());
    }
    json result;
    result["preset"] = preset_name.empty() ? json(nullptr) : json(preset_name);
    result["facets"] = h.inequalities.size();
    result["vertices"] = res.vertex_count;
    result["t_delta"] = res.t_delta;
    result["argmin_vertex"] = res.argmin_vertex;
    result["enumeration_seconds"] = res.enumeration_seconds;
    result["scan_seconds"] = res.scan_seconds;
    result["jobs"] = cli.jobs;
    emit_report("polytope-bound", std::nullopt, result, nullptr, elapsed());
    return 0;
  }

  // Remaining commands read a POVM document.
  const std::string text = read_input(in_path);
  const std::string digest = json_io::digest_hex(text);
  const Povm m = json_io::povm_from_json(parse_json(text), cli.tol);

  if (*c_validate) {
    json result;
    result["valid"] = true;
    result["dim"] = m.dim;
    result["outcomes"] = m.outcomes();
    result["projective"] = is_projective(m, cli.tol.projectivity);
    result["sufficient_simulable"] = sufficient_simulable(m);
    emit_report("validate", digest, result, nullptr, elapsed());
    return 0;
  }
  if (*c_vis) {
    const auto res = visibility_m_outcome(m, m_outcomes, vopts);
    json result;
    result["m"] = m_outcomes;
    result["t"] = res.t_star;
    if (!cert_path.empty()) {
      write_file(cert_path, json_io::canonical_dump(json_io::visibility_to_json(res)));
      result["certificate_path"] = cert_path;
    }
    emit_report("visibility", digest, result, diag_json(res.diagnostics), elapsed());
    return 0;
  }
  if (*c_qv) {
    const auto res = visibility_qutrit_projective(m, vopts);
    json result;
    result["t"] = res.t_star;
    if (!strategy_path.empty()) {
      const auto strategy = strategy_from_certificate(m, res);
      write_file(strategy_path, json_io::canonical_dump(json_io::strategy_to_json(strategy, m.dim)));
      result["strategy_path"] = strategy_path;
      result["strategy_members"] = strategy.members.size();
    }
    emit_report("qutrit-visibility", digest, result, diag_json(res.diagnostics), elapsed());
    return 0;
  }
  if (*c_sim) {
    SimulationStrategy strategy;
    json result;
    result["t"] = sim_t;
    if (m.dim <= 2 || m.dim == 3) {
      VisibilityOptions fixed = vopts;
      fixed.fixed_visibility = sim_t;
      const auto cert = (m.dim == 3) ? visibility_qutrit_projective(m, fixed)
                                     : visibility_m_outcome(m, std::min(2, m.outcomes()), fixed);
      strategy = strategy_from_certificate(m, cert);
      result["method"] = "sdp-certificate";
    } else {
      // Only the universal 1/d protocol is available beyond qutrits.
      if (std::abs(sim_t - 1.0 / m.dim) > 1e-9)
        throw InvalidArgument("for d > 3 only t = 1/d strategies are constructive here");
      strategy = protocol_inverse_d(m);
      result["method"] = "inverse-d-protocol";
    }
    result["members"] = strategy.members.size();
    const std::string payload = json_io::canonical_dump(json_io::strategy_to_json(strategy, m.dim));
    if (!sim_out.empty()) {
      write_file(sim_out, payload);
      result["strategy_path"] = sim_out;
      emit_report("simulate", digest, result, nullptr, elapsed());
    } else {
      result["strategy"] = json_io::strategy_to_json(strategy, m.dim);
      emit_report("simulate", digest, result, nullptr, elapsed());
    }
    return 0;
  }
  if (*c_dec) {
    const auto parts = trace_one ? decompose_trace_one_qutrit(m, cli.tol) : decompose_extremal(m, cli.tol);
    json result;
    json weights = json::array();
    json members = json::array();
    for (const auto& [w, member] : parts) {
      weights.push_back(w);
      members.push_back(json_io::povm_to_json(member));
    }
    result["weights"] = std::move(weights);
    result["members"] = std::move(members);
    emit_report("decompose", digest, result, nullptr, elapsed());
    return 0;
  }
  if (*c_nai) {
    const Dilation dil = dilate(m);
    const double deviation = verify_dilation(m, dil, 100, cli.seed);
    json result;
    result["ancilla_dim"] = dil.ancilla_dim;
    result["members"] = dil.strategy.members.size();
    result["verification_deviation"] = deviation;
    const std::string payload = json_io::canonical_dump(json_io::dilation_to_json(dil));
    if (!nai_out.empty()) {
      write_file(nai_out, payload);
      result["dilation_path"] = nai_out;
    } else {
      result["dilation"] = json_io::dilation_to_json(dil);
    }
    emit_report("naimark", digest, result, nullptr, elapsed());
    return 0;
  }
  throw InvalidArgument("no subcommand handled");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    CLI::App dummy;
    dummy.exit(e);
    json err;
    err["error"] = {{"code", "Usage"}, {"message", e.what()}};
    std::cout << json_io::canonical_dump(err);
    return 4;
  } catch (const Error& e) {
    json err;
    err["error"] = {{"code", e.code()}, {"message", e.what()}};
    std::cout << json_io::canonical_dump(err);
    const std::string& code = e.code();
    if (code == "EffectNotPsd" || code == "NotNormalized" || code == "NonHermitianInput" ||
        code == "ParseError" || code == "NotTraceOne" || code == "InvalidSeed")
      return 2;
    if (code == "SolverFailure" || code == "CertificateInconsistent") return 3;
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = {{"code", "Internal"}, {"message", e.what()}};
    std::cout << json_io::canonical_dump(err);
    return 1;
  }
}
