#pragma once

#include <string>

#include "cbvs/decision.hpp"

namespace cbvs {

inline constexpr int kReportSchemaVersion = 1;

/// Serializes a SelectionReport to the versioned JSON schema
/// (see docs/report_schema.md). Output is byte-stable for identical inputs.
std::string report_to_json(const SelectionReport& report);

}  // namespace cbvs
