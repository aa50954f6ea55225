#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fracdiff {

/// r = log2(e_h / e_{h/2}) between adjacent sweep entries.
std::vector<double> compute_rates(std::span<const double> errors);

struct RateRow {
  std::string label;   // parameter pair, e.g. "(0.3,0)"
  long sweep = 0;      // N or N_t
  double error = 0.0;
  double rate = 0.0;   // NaN for the first entry of a sweep
  bool ok = true;
  std::string note;    // failure diagnostic when ok == false
};

struct RateTable {
  std::string problem;
  std::string norm;      // "l2" or "max"
  std::string revision;  // build revision when known
  std::vector<RateRow> rows;
};

enum class ReportFormat { Csv, Json, Markdown };

ReportFormat parse_format(const std::string& name);

/// Bit-stable emission: fixed %.6e float formatting, no timestamps.
void emit_report(const RateTable& table, ReportFormat format, std::ostream& out);
void emit_report_file(const RateTable& table, ReportFormat format, const std::string& path);

}  // namespace fracdiff
