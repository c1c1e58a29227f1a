// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "dagsobol/sobol.hpp"

namespace dagsobol {

/// Extra run context recorded next to the indices in the JSON report.
struct ReportMeta {
  std::string engine;
  std::string process;
  std::vector<int> degrees;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, double> constants;  // process constants in effect
};

/// Versioned JSON document for one fit (schema: docs/report.schema.json).
std::string report_to_json(const SobolReport& report, const ReportMeta& meta);
void write_report_json(const std::string& path, const SobolReport& report,
                       const ReportMeta& meta);

/// Pareto data as CSV: input,first_order,cumulative_share.
std::string pareto_to_csv(const SobolReport& report);
/// Static SVG bar chart of the first-order indices with the cumulative line.
std::string pareto_to_svg(const SobolReport& report, const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dagsobol
