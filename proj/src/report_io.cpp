#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssf/errors.hpp"
#include "ssf/runners.hpp"
#include "ssf/version.hpp"

namespace ssf {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(errc::config_error, "cannot create output directory '" + dir + "'");
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) ensure_dir(parent.string());
  std::ofstream out(path);
  if (!out) fail(errc::config_error, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_report_files(const RunReport& report, const std::string& out_dir) {
  ensure_dir(out_dir);

  nlohmann::json j;
  j["version"] = report.version;
  j["config_hash"] = report.config_hash;
  j["subcommand"] = report.subcommand;
  j["pass"] = report.pass;
  j["checks"] = nlohmann::json::array();
  for (const CheckLine& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  }
  j["notes"] = report.notes;
  if (!report.header.empty()) {
    nlohmann::json table;
    table["header"] = report.header;
    nlohmann::json rows = nlohmann::json::array();
    const std::size_t nrows = report.columns.empty() ? 0 : report.columns[0].size();
    for (std::size_t r = 0; r < nrows; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& col : report.columns) row.push_back(col[r]);
      rows.push_back(row);
    }
    table["rows"] = rows;
    j["table"] = table;
  }
  {
    std::ofstream out(out_dir + "/report.json");
    if (!out) fail(errc::config_error, "cannot write report.json");
    out << j.dump(2) << "\n";
  }

  std::ofstream txt(out_dir + "/report.txt");
  if (!txt) fail(errc::config_error, "cannot write report.txt");
  txt << report.subcommand << " v" << report.version
      << " config " << report.config_hash << "\n";
  for (const CheckLine& c : report.checks) {
    txt << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": value "
        << fmt17(c.value) << " tolerance " << fmt17(c.tolerance);
    if (!c.detail.empty()) txt << " (" << c.detail << ")";
    txt << "\n";
  }
  for (const std::string& n : report.notes) txt << "note: " << n << "\n";
  txt << (report.pass ? "RESULT: PASS\n" : "RESULT: FAIL\n");
}

RunReport run_report_merge(const std::vector<std::string>& report_paths,
                           const std::string& out_dir) {
  RunReport merged;
  merged.subcommand = "report";
  merged.version = kVersion;
  merged.config_hash = "merged";
  for (const std::string& path : report_paths) {
    std::ifstream in(path);
    if (!in) fail(errc::config_error, "cannot open report '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      fail(errc::config_error, "bad report '" + path + "': " + e.what());
    }
    const std::string tag = j.value("subcommand", "unknown");
    for (const auto& c : j.value("checks", nlohmann::json::array())) {
      CheckLine line;
      line.name = tag + "/" + c.value("name", "");
      line.pass = c.value("pass", false);
      line.value = c.value("value", 0.0);
      line.tolerance = c.value("tolerance", 0.0);
      line.detail = c.value("detail", "");
      merged.checks.push_back(line);
      merged.pass = merged.pass && line.pass;
    }
    for (const auto& n : j.value("notes", nlohmann::json::array()))
      merged.notes.push_back(tag + ": " + n.get<std::string>());
  }
  write_report_files(merged, out_dir);
  return merged;
}

}  // namespace ssf
