#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nslab {

/// Informational checks are recorded but never decide the exit status.
enum class CheckStatus { pass, fail, informational };

std::string to_string(CheckStatus s);
CheckStatus parse_check_status(const std::string& s);

struct CheckRecord {
  std::string name;
  std::string anchor;  ///< which claim of the analysis the check traces to
  double measured = 0.0;
  std::optional<double> reference;
  std::string band;    ///< human-readable acceptance band, e.g. "<= 1e-12"
  CheckStatus status = CheckStatus::informational;
  std::string detail;  ///< exact values or extra context, optional
};

/// Builds a pass/fail record from a boolean outcome.
CheckRecord make_check(std::string name, std::string anchor, double measured, std::optional<double> reference,
                       std::string band, bool ok, std::string detail = {});
CheckRecord make_info(std::string name, std::string anchor, double measured, std::string detail = {});

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Formats doubles for CSV cells with round-trip precision.
std::string csv_number(double v);

struct CampaignReport {
  std::string campaign;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<CheckRecord> checks;
  std::vector<CsvTable> tables;
  double wall_seconds = 0.0;  // kept out of the JSON document

  bool passed() const;
  std::size_t count(CheckStatus s) const;
  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  void param(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
};

std::string report_to_json_text(const CampaignReport& r);
CampaignReport report_from_json_text(const std::string& text);
std::string table_to_csv(const CsvTable& t);

/// Writes <campaign>.json, one <campaign>_<table>.csv per table and appends
/// the wall time to timings.json in `dir`.
void write_report(const CampaignReport& r, const std::string& dir);

void print_summary(const CampaignReport& r, std::ostream& os);

}  // namespace nslab
