#pragma once

#include <string>

#include "primpoint/count.hpp"

namespace primpoint {

enum class ReportFormat { Json, Csv };

// Stable key order (q, p, n, poly, method, count, main_term, deviation,
// bound, holds, elapsed_ms). Counts are integers; analytic values carry 12
// significant digits. Identical reports serialize byte-identically apart
// from elapsed_ms.
std::string emit_report(const CountReport& report, ReportFormat format);
std::string report_csv_header();

std::string format_sig12(double v);
std::string json_escape(const std::string& s);

}  // namespace primpoint
