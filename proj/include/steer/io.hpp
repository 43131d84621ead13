#pragma once

// JSON reading and writing.
//
//   matrix       {"rows": r, "cols": c, "data": [[re, im], ...]}   row-major
//   state        {"dims": [dA, dB], "matrix": matrix}
//   measurements {"settings": nx, "outcomes": na, "elements": [[matrix per a] per x]}
//   assemblage   {"settings": nx, "outcomes": na, "members": [[matrix per a] per x]}
//   instrument   {"input_dim": n, "output_dim": m, "branches": [[kraus matrix, ...], ...]}
//
// Labels in reports are 1-based.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "steer/discrimination.hpp"
#include "steer/mub.hpp"
#include "steer/quantum.hpp"
#include "steer/robustness.hpp"

namespace steer::io {

using Json = nlohmann::ordered_json;

/// Throws ErrorKind::Parse with `what` in the message.
Json parse(const std::string& text, const std::string& what = "input");
Json read_file(const std::string& path);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);
HermitianOperator operator_from_json(const Json& j, const std::string& where);

Json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const Json& j);

Json measurements_to_json(const MeasurementAssemblage& ma);
MeasurementAssemblage measurements_from_json(const Json& j);

Json assemblage_to_json(const Assemblage& a);
Assemblage assemblage_from_json(const Json& j);

Json instrument_to_json(const Instrument& inst);
Instrument instrument_from_json(const Json& j);

Json witness_to_json(const OperatorGrid& f);

Json report_to_json(const SteeringReport& r, std::uint64_t seed);

struct SeesawSummary {
  int rounds = 0;
  double start = 0.0;
  double robustness = 0.0;
  std::vector<double> history;
};

Json state_report_to_json(const StateSteeringReport& r, std::uint64_t seed,
                          const std::optional<SeesawSummary>& seesaw = std::nullopt);
Json discrimination_to_json(const DiscriminationResult& r);
Json mub_report_to_json(const MubBoundReport& r, std::uint64_t seed);

enum class ReportKind { Robustness, StateSteering, Discrimination, MubBound };

/// Checks the fields and types of an emitted report; throws ErrorKind::Parse.
void check_report_schema(const Json& j, ReportKind kind);

}  // namespace steer::io
