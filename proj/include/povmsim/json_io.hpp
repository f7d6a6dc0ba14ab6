#pragma once

#include <string>

#include "json.hpp"
#include "povmsim/naimark.hpp"
#include "povmsim/povm.hpp"
#include "povmsim/simulability.hpp"

namespace povmsim::json_io {

using nlohmann::json;

/// Canonical serialisation: objects with sorted keys (nlohmann's default
/// ordering) and every floating-point number printed with 17 significant
/// digits, so emission is byte-stable across round trips.
std::string canonical_dump(const json& j, int indent = 2);

json povm_to_json(const Povm& m);

/// Parses and validates; throws ParseError on malformed documents and the
/// usual validation errors (EffectNotPsd, NotNormalized) on invalid POVMs.
Povm povm_from_json(const json& j, const Tolerances& tol = default_tolerances());

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, int rows, int cols);

json strategy_to_json(const SimulationStrategy& s, int dim);
json post_processing_to_json(const PostProcessing& q);
json visibility_to_json(const VisibilityResult& r);
json dilation_to_json(const Dilation& d);

/// FNV-1a content digest used in run reports.
std::string digest_hex(const std::string& bytes);

}  // namespace povmsim::json_io
