#pragma once

#include <string>
#include <string_view>

#include "hampack/pipeline.hpp"

namespace hampack {

enum class ReportFormat { json, text };

/// Stable field order; doubles are written with round-trip precision.
std::string serialize_report(const PackingReport& r, ReportFormat format = ReportFormat::json);

/// Inverse of serialize_report. Throws ParseError on malformed input or an
/// unsupported schema version.
PackingReport parse_report(std::string_view text, ReportFormat format = ReportFormat::json);

/// Top-level JSON keys in emission order.
inline constexpr std::string_view kReportKeys[] = {
    "schema_version", "n",       "p",      "seed",   "config", "delta",
    "k_target",       "outcome", "cycles", "stages", "timing_ms"};

}  // namespace hampack
