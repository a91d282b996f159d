#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "arsenal/experiment.hpp"
#include "arsenal/metrics.hpp"

namespace arsenal {

using Json = nlohmann::ordered_json;

enum class ReportFormat : std::uint8_t { csv, json };
ReportFormat parse_format(std::string_view name);

Json to_json(const SimReport& report);
SimReport report_from_json(const Json& j);
Json to_json(const CompareReport& report);
Json to_json(const OverheadReport& report);

/// Column list of the per-experiment CSV row, in order.
std::string_view csv_header();
std::string csv_row(const SimReport& report);

void emit_report(const SimReport& report, ReportFormat format, std::ostream& sink);
void emit_report(const CompareReport& report, ReportFormat format, std::ostream& sink);
/// Writes to a file; throws IoError if it cannot be opened or written.
void emit_report_file(const SimReport& report, ReportFormat format, const std::string& path);

/// Human-readable speedup table, one row per trace, one column per engine.
std::string format_compare_table(const CompareReport& report);
std::string format_overhead(const OverheadReport& report);

}  // namespace arsenal
