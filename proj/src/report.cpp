#include "nslab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nslab {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::informational: return "informational";
  }
  return "?";
}

CheckStatus parse_check_status(const std::string& s) {
  if (s == "pass") return CheckStatus::pass;
  if (s == "fail") return CheckStatus::fail;
  if (s == "informational") return CheckStatus::informational;
  throw std::invalid_argument("unknown check status '" + s + "'");
}

CheckRecord make_check(std::string name, std::string anchor, double measured, std::optional<double> reference,
                       std::string band, bool ok, std::string detail) {
  return {std::move(name), std::move(anchor), measured, reference, std::move(band),
          ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

CheckRecord make_info(std::string name, std::string anchor, double measured, std::string detail) {
  return {std::move(name), std::move(anchor), measured, std::nullopt, "", CheckStatus::informational,
          std::move(detail)};
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("csv row width does not match table '" + name + "'");
  rows.push_back(std::move(row));
}

std::string csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool CampaignReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
}

std::size_t CampaignReport::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [&](const auto& c) { return c.status == s; }));
}

namespace {

// Non-finite values have no JSON literal; they travel as strings.
ojson number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const ojson& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw std::invalid_argument("bad number '" + s + "'");
}

}  // namespace

std::string report_to_json_text(const CampaignReport& r) {
  ojson j;
  j["campaign"] = r.campaign;
  ojson params = ojson::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson o;
    o["name"] = c.name;
    o["anchor"] = c.anchor;
    o["measured"] = number_to_json(c.measured);
    o["reference"] = c.reference ? number_to_json(*c.reference) : ojson(nullptr);
    o["band"] = c.band;
    o["status"] = to_string(c.status);
    o["detail"] = c.detail;
    checks.push_back(o);
  }
  j["checks"] = checks;
  ojson tables = ojson::array();
  for (const auto& t : r.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
  j["tables"] = tables;
  j["passed"] = r.passed();
  return j.dump(2) + "\n";
}

CampaignReport report_from_json_text(const std::string& text) {
  const ojson j = ojson::parse(text);
  CampaignReport r;
  r.campaign = j.at("campaign").get<std::string>();
  for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, v.get<std::string>());
  for (const auto& o : j.at("checks")) {
    CheckRecord c;
    c.name = o.at("name").get<std::string>();
    c.anchor = o.at("anchor").get<std::string>();
    c.measured = number_from_json(o.at("measured"));
    if (!o.at("reference").is_null()) c.reference = number_from_json(o.at("reference"));
    c.band = o.at("band").get<std::string>();
    c.status = parse_check_status(o.at("status").get<std::string>());
    c.detail = o.at("detail").get<std::string>();
    r.checks.push_back(std::move(c));
  }
  for (const auto& o : j.at("tables")) {
    CsvTable t;
    t.name = o.at("name").get<std::string>();
    t.columns = o.at("columns").get<std::vector<std::string>>();
    t.rows = o.at("rows").get<std::vector<std::vector<std::string>>>();
    r.tables.push_back(std::move(t));
  }
  return r;
}

std::string table_to_csv(const CsvTable& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(t.columns);
  for (const auto& row : t.rows) line(row);
  return os.str();
}

void write_report(const CampaignReport& r, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  std::ofstream(base / (r.campaign + ".json")) << report_to_json_text(r);
  for (const auto& t : r.tables) std::ofstream(base / (r.campaign + "_" + t.name + ".csv")) << table_to_csv(t);

  const fs::path timings = base / "timings.json";
  nlohmann::json tj = nlohmann::json::object();
  if (std::ifstream in(timings); in) {
    try {
      in >> tj;
    } catch (const nlohmann::json::exception&) {
      tj = nlohmann::json::object();
    }
  }
  tj[r.campaign] = r.wall_seconds;
  std::ofstream(timings) << tj.dump(2) << "\n";
}

void print_summary(const CampaignReport& r, std::ostream& os) {
  os << "== " << r.campaign << " (" << std::fixed << std::setprecision(1) << r.wall_seconds << " s)\n";
  os << std::defaultfloat;
  std::size_t w = 24;
  for (const auto& c : r.checks) w = std::max(w, c.name.size() + 2);
  for (const auto& c : r.checks) {
    os << "  " << std::left << std::setw(static_cast<int>(w)) << c.name << std::setw(14) << to_string(c.status)
       << std::setprecision(6) << c.measured;
    if (!c.band.empty()) os << "  [" << c.band << "]";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  os << std::right << "  " << r.count(CheckStatus::pass) << " pass, " << r.count(CheckStatus::fail) << " fail, "
     << r.count(CheckStatus::informational) << " informational\n";
}

}  // namespace nslab
