#ifndef SSF_CONFIG_HPP
#define SSF_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ssf/potential.hpp"
#include "ssf/spectral.hpp"

namespace ssf {

// Complete, serializable description of one experiment. Parsed from a flat
// sectioned key = value text; unknown sections or keys are hard errors.
struct ExperimentConfig {
  // [experiment]
  int dimension = 1;  // 1 | 3
  std::uint64_t seed = 0x5d3f1c2b9a17e64dULL;
  std::string output_dir = "out";

  // [operators]
  double box_half_width = 20.0;
  int grid_points = 2000;
  PotentialFamily family = PotentialFamily::gaussian;
  double depth = -1.0;
  double range = 1.0;
  double alpha = 9.0;
  int certify_samples = 2000;

  // [ssf_resolvent]
  double shift = 0.0;  // 0 = choose 2 + max(0, -min eigenvalue) at run time
  int power = 1;
  std::vector<double> eta_factors{8.0, 4.0, 2.0};  // x local level spacing
  int fixed_grid_eta_count = 7;                    // eta -> 0 schedule length
  double beta = 0.0;  // 0 = window midpoint from (alpha, dimension)

  // [spectral]
  std::vector<TestFunction> test_functions{
      {TestFunctionFamily::heat_kernel, 0.0, 0.2},
      {TestFunctionFamily::heat_kernel, 0.0, 0.5},
      {TestFunctionFamily::heat_kernel, 0.0, 1.0},
      {TestFunctionFamily::bump, 2.0, 1.5},
  };
  int curve_uniform_points = 24000;

  // [excess]
  std::vector<double> r_schedule{5.0, 10.0, 20.0, 40.0};
  double plateau = 0.5;

  // [scattering]
  double k_max = 9.0;
  int k_points = 400;
  int lmax = -1;  // -1 = policy ceil(k a_eff) + 8

  // [probes]
  double wtrace_box = 12.0;
  int wtrace_points = 150;
  int wtrace_refinements = 4;
  double boundary_box = 4.0;
  int boundary_points = 400;
  double boundary_lambda = 1.0;
  double boundary_eta0 = 0.1;
  int boundary_eta_count = 7;

  // [cli]
  std::vector<double> lambda_grid{0.25, 0.7857142857142857, 1.3214285714285714,
                                  1.8571428571428572, 2.392857142857143,
                                  2.9285714285714284, 3.4642857142857144, 4.0};
  double tolerance_friedel = 0.05;
  double tolerance_krein = 1e-3;
  double tolerance_route = 1e-8;
  int threads = 0;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Built-in presets: gauss1d, well3d, gauss1d-desk, square1d-desk, probe1d.
ExperimentConfig load_preset(const std::string& name);
std::vector<std::string> preset_names();

// Applies KEY=VALUE overrides of the [cli] tolerance keys.
void apply_tolerance_override(ExperimentConfig& cfg, const std::string& spec);

// Canonical serialized form; identical configs serialize identically.
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

void validate_config(const ExperimentConfig& cfg);

}  // namespace ssf

#endif
