#pragma once

// JSON tree forms used on disk and by the HTTP API. Key names are stable.

#include <json.hpp>

#include "vital/adapters.hpp"
#include "vital/frame.hpp"
#include "vital/quality.hpp"

namespace vital {

using Json = nlohmann::json;

Json to_json(const CanonicalFrame& frame);
CanonicalFrame frame_from_json(const Json& j);

Json to_json(const Dataset& dataset);
/// Throws invariant-violation or parse-error; validates the result.
Dataset dataset_from_json(const Json& j);

Json to_json(const DailySummary& summary);

Json to_json(const FilterSpec& spec);
/// Missing keys keep their defaults. Throws bad-request on wrong types.
FilterSpec filter_spec_from_json(const Json& j);

Json to_json(const QualityReport& report);
QualityReport quality_report_from_json(const Json& j);

/// kept/dropped dates with reasons.
Json retention_summary(const FilterResult& result);

Json to_json(const Diagnostic& diagnostic);

}  // namespace vital
