#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "alignfluct/montecarlo.hpp"

namespace alignfluct {

struct JsonOptions {
  /// Wall-clock timings vary between runs; they are left out unless asked for
  /// so that reports for a fixed seed are byte-identical.
  bool include_timings = false;
  int indent = 2;
};

std::string to_json_text(const EstimateReport& report, const JsonOptions& opts = {});
std::string to_json_text(const PValueReport& report, const JsonOptions& opts = {});
std::string to_json_text(const ExpectedChangeReport& report, const JsonOptions& opts = {});
std::string to_json_text(const VarianceScanReport& report, const JsonOptions& opts = {});

EstimateReport estimate_report_from_json(std::string_view text);
PValueReport pvalue_report_from_json(std::string_view text);
ExpectedChangeReport expected_change_report_from_json(std::string_view text);
VarianceScanReport variance_report_from_json(std::string_view text);

/// CSV with 17 significant digits. Estimate columns:
/// replicate,seed,L_S,L_SmT,x_r,wall_ms
void write_csv(std::ostream& out, const EstimateReport& report);
void write_csv(std::ostream& out, const PValueReport& report);
void write_csv(std::ostream& out, const ExpectedChangeReport& report);
void write_csv(std::ostream& out, const VarianceScanReport& report);

/// Reads back the replicate rows of write_csv(EstimateReport) and recomputes
/// the summary; the config echo is not part of the CSV.
EstimateReport estimate_report_from_csv(std::string_view text);

}  // namespace alignfluct
