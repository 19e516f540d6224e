#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "coherent/bellman.hpp"
#include "coherent/extremal.hpp"
#include "coherent/forest.hpp"
#include "coherent/pipeline.hpp"
#include "coherent/prob.hpp"
#include "coherent/search.hpp"
#include "coherent/steppair.hpp"
#include "coherent/symmetry.hpp"

namespace coherent {

using Json = nlohmann::ordered_json;

/// Two-space indented dump with a trailing newline. Byte-stable.
std::string dump(const Json& doc);

/// Parses text; malformed input raises InvalidParameter.
Json parse_json(const std::string& text);

Json rational_json(const Rational& value);
Rational rational_from_json(const Json& value);

/// {"masses": ["p/q", ...], "event_A": [...], "partitions": [[[...], ...], ...]}
Json model_to_json(const CoherentModel& model);
CoherentModel model_from_json(const Json& doc);

Json opinions_to_json(const OpinionMatrix& opinions);

/// {"segments": [{"from", "H", "L"}, ...], "tail_from"}
Json step_pair_to_json(const StepPair& pair);
StepPair step_pair_from_json(const Json& doc);

Json lambda_report_to_json(const LambdaReport& report);
Json cprime_report_to_json(const CprimeReport& report);
Json symmetry_report_to_json(const SymmetryReport& report);
Json extremal_certificate_to_json(const ExtremalCertificate& cert);

/// Nested nodes: {"from", "to", "H", "depth", "expanded", "children": [...]}.
Json forest_to_json(const Forest& forest);
/// Flat list of {"parent": [from, to], "child": [from, to]}.
Json forest_edges_to_json(const Forest& forest);
Json forest_report_to_json(const ForestReport& report);

SearchConfig search_config_from_json(const Json& doc);
Json search_config_to_json(const SearchConfig& config);
Json search_result_to_json(const SearchResult& result);
Json search_certificate_to_json(const SearchCertificate& cert);
Json pipeline_report_to_json(const PipelineReport& report);

/// Header x,phi_m,psi,deficiency followed by decimal renderings of each.
void write_bellman_csv(std::ostream& out, const BellmanTable& table);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace coherent
