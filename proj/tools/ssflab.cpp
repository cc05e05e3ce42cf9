// Experiment driver: builds spectral-shift, phase, and excess-charge curves
// from a config or preset and reports the cross-route checks.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "ssf/config.hpp"
#include "ssf/errors.hpp"
#include "ssf/runners.hpp"
#include "ssf/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  int threads = -1;
  std::vector<std::string> tolerance_overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file path");
  cmd->add_option("--preset", args.preset, "built-in preset name");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
  cmd->add_option("--tolerance-override", args.tolerance_overrides,
                  "KEY=VALUE tolerance override (repeatable)");
}

ssf::ExperimentConfig resolve_config(const CommonArgs& args) {
  if (!args.config_path.empty() && !args.preset.empty())
    ssf::fail(ssf::errc::config_error, "give either --config or --preset, not both");
  ssf::ExperimentConfig cfg;
  if (!args.config_path.empty())
    cfg = ssf::load_config_file(args.config_path);
  else if (!args.preset.empty())
    cfg = ssf::load_preset(args.preset);
  else
    ssf::fail(ssf::errc::config_error, "need --config PATH or --preset NAME");
  for (const std::string& ov : args.tolerance_overrides)
    ssf::apply_tolerance_override(cfg, ov);
  if (args.threads >= 0) cfg.threads = args.threads;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  ssf::validate_config(cfg);
  return cfg;
}

int exit_code_for(const ssf::Error& e) {
  switch (e.code()) {
    case ssf::errc::config_error: return 2;
    case ssf::errc::solver_failure: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral shift / excess charge / phase shift laboratory"};
  app.set_version_flag("--version", ssf::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<std::string> merge_paths;

  CLI::App* ssf_cmd = app.add_subcommand("ssf", "boundary-value SSF curves");
  CLI::App* phase_cmd = app.add_subcommand("phase", "scattering phase curves");
  CLI::App* excess_cmd = app.add_subcommand("excess", "cutoff excess charge");
  CLI::App* friedel_cmd =
      app.add_subcommand("friedel-check", "theta vs xi vs Z cross-route check");
  CLI::App* krein_cmd =
      app.add_subcommand("krein-check", "trace-formula two-sided check");
  CLI::App* probes_cmd =
      app.add_subcommand("probes", "weighted trace and boundary-limit probes");
  CLI::App* report_cmd = app.add_subcommand("report", "merge previous reports");
  for (CLI::App* c : {ssf_cmd, phase_cmd, excess_cmd, friedel_cmd, krein_cmd, probes_cmd})
    add_common(c, args);
  report_cmd->add_option("reports", merge_paths, "report.json files to merge")
      ->required();
  report_cmd->add_option("--out", args.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    ssf::RunReport rep;
    if (report_cmd->parsed()) {
      rep = ssf::run_report_merge(merge_paths,
                                  args.out_dir.empty() ? "out" : args.out_dir);
    } else {
      const ssf::ExperimentConfig cfg = resolve_config(args);
      const std::string out = cfg.output_dir;
      if (ssf_cmd->parsed()) rep = ssf::run_ssf(cfg, out);
      else if (phase_cmd->parsed()) rep = ssf::run_phase(cfg, out);
      else if (excess_cmd->parsed()) rep = ssf::run_excess(cfg, out);
      else if (friedel_cmd->parsed()) rep = ssf::run_friedel_check(cfg, out);
      else if (krein_cmd->parsed()) rep = ssf::run_krein_check(cfg, out);
      else if (probes_cmd->parsed()) rep = ssf::run_probes(cfg, out);
    }
    for (const ssf::CheckLine& c : rep.checks)
      std::printf("%s %s: %.6g (tolerance %.3g)\n", c.pass ? "[PASS]" : "[FAIL]",
                  c.name.c_str(), c.value, c.tolerance);
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : 1;
  } catch (const ssf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
