#include "fracdiff/rates.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fracdiff {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<double> compute_rates(std::span<const double> errors) {
  std::vector<double> r(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < errors.size(); ++i)
    r[i] = std::log2(errors[i - 1] / errors[i]);
  return r;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  throw std::invalid_argument("unknown report format: " + name);
}

void emit_report(const RateTable& table, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Csv: {
      out << "problem,norm,revision,label,sweep,error,rate,ok,note\n";
      for (const auto& r : table.rows)
        out << table.problem << ',' << table.norm << ',' << table.revision << ','
            << r.label << ',' << r.sweep << ',' << fmt(r.error) << ',' << fmt(r.rate)
            << ',' << (r.ok ? "1" : "0") << ',' << r.note << '\n';
      break;
    }
    case ReportFormat::Json: {
      out << "{\n  \"problem\": \"" << json_escape(table.problem) << "\",\n"
          << "  \"norm\": \"" << json_escape(table.norm) << "\",\n"
          << "  \"revision\": \"" << json_escape(table.revision) << "\",\n"
          << "  \"rows\": [\n";
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        out << "    {\"label\": \"" << json_escape(r.label) << "\", \"sweep\": " << r.sweep
            << ", \"error\": " << (std::isnan(r.error) ? "null" : fmt(r.error))
            << ", \"rate\": " << (std::isnan(r.rate) ? "null" : fmt(r.rate))
            << ", \"ok\": " << (r.ok ? "true" : "false") << ", \"note\": \""
            << json_escape(r.note) << "\"}" << (i + 1 < table.rows.size() ? "," : "")
            << '\n';
      }
      out << "  ]\n}\n";
      break;
    }
    case ReportFormat::Markdown: {
      out << "## " << table.problem << " (" << table.norm << " norm)\n\n"
          << "| label | sweep | error | rate | ok | note |\n"
          << "| --- | ---: | ---: | ---: | :-: | --- |\n";
      for (const auto& r : table.rows)
        out << "| " << r.label << " | " << r.sweep << " | " << fmt(r.error) << " | "
            << fmt(r.rate) << " | " << (r.ok ? "yes" : "no") << " | " << r.note
            << " |\n";
      break;
    }
  }
}

void emit_report_file(const RateTable& table, ReportFormat format,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file: " + path);
  emit_report(table, format, out);
  if (!out) throw std::runtime_error("failed writing report file: " + path);
}

}  // namespace fracdiff
