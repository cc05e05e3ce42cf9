#ifndef SSF_RUNNERS_HPP
#define SSF_RUNNERS_HPP

#include <string>
#include <vector>

#include "ssf/config.hpp"

namespace ssf {

struct CheckLine {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct RunReport {
  std::string subcommand;
  std::string version;
  std::string config_hash;
  bool pass = true;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;
  // column-oriented result table; columns.size() == header.size()
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

// Each runner computes its pipeline, writes curves.csv / report.json /
// report.txt under out_dir, and returns the report (report.pass mirrors the
// acceptance state of the run's own checks).
RunReport run_ssf(const ExperimentConfig& cfg, const std::string& out_dir);
RunReport run_phase(const ExperimentConfig& cfg, const std::string& out_dir);
RunReport run_excess(const ExperimentConfig& cfg, const std::string& out_dir);
RunReport run_friedel_check(const ExperimentConfig& cfg, const std::string& out_dir);
RunReport run_krein_check(const ExperimentConfig& cfg, const std::string& out_dir);
RunReport run_probes(const ExperimentConfig& cfg, const std::string& out_dir);

// Merges previously written report.json files into one summary.
RunReport run_report_merge(const std::vector<std::string>& report_paths,
                           const std::string& out_dir);

void write_report_files(const RunReport& report, const std::string& out_dir);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// 17-significant-digit decimal form used for every CSV/JSON number.
std::string fmt17(double v);

}  // namespace ssf

#endif
