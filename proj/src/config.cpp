#include "ssf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "ssf/errors.hpp"
#include "ssf/weight_probes.hpp"

namespace ssf {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(errc::config_error, "key '" + key + "': bad number '" + item + "'");
    }
  }
  if (out.empty()) fail(errc::config_error, "key '" + key + "': empty list");
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  const std::vector<double> list = parse_double_list(v, key);
  if (list.size() != 1) fail(errc::config_error, "key '" + key + "': expected one number");
  return list[0];
}

long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long x = std::stol(trim(v), &used);
    if (used != trim(v).size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(errc::config_error, "key '" + key + "': bad integer '" + v + "'");
  }
}

std::vector<TestFunction> parse_test_functions(const std::string& v) {
  // comma-separated entries: heat:t | gauss:center:width | bump:center:width
  std::vector<TestFunction> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ps(item);
    std::string p;
    while (std::getline(ps, p, ':')) parts.push_back(trim(p));
    TestFunction f;
    if (parts[0] == "heat" && parts.size() == 2) {
      f.family = TestFunctionFamily::heat_kernel;
      f.width = parse_double(parts[1], "test_functions");
    } else if (parts[0] == "gauss" && parts.size() == 3) {
      f.family = TestFunctionFamily::gaussian_energy;
      f.center = parse_double(parts[1], "test_functions");
      f.width = parse_double(parts[2], "test_functions");
    } else if (parts[0] == "bump" && parts.size() == 3) {
      f.family = TestFunctionFamily::bump;
      f.center = parse_double(parts[1], "test_functions");
      f.width = parse_double(parts[2], "test_functions");
    } else {
      fail(errc::config_error, "test_functions: bad entry '" + item + "'");
    }
    out.push_back(f);
  }
  if (out.empty()) fail(errc::config_error, "test_functions: empty list");
  return out;
}

std::string test_functions_text(const std::vector<TestFunction>& fs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) os << ",";
    switch (fs[i].family) {
      case TestFunctionFamily::heat_kernel:
        os << "heat:" << fs[i].width;
        break;
      case TestFunctionFamily::gaussian_energy:
        os << "gauss:" << fs[i].center << ":" << fs[i].width;
        break;
      case TestFunctionFamily::bump:
        os << "bump:" << fs[i].center << ":" << fs[i].width;
        break;
    }
  }
  return os.str();
}

std::string list_text(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(errc::config_error, "line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"experiment", "operators", "ssf_resolvent",
                                    "spectral", "excess", "scattering",
                                    "probes", "cli"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* s) {
            return section == s;
          }) == std::end(known))
        fail(errc::config_error, "unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "experiment.dimension") cfg.dimension = static_cast<int>(parse_int(value, qual));
    else if (qual == "experiment.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, qual));
    else if (qual == "experiment.output") cfg.output_dir = value;
    else if (qual == "operators.box_half_width") cfg.box_half_width = parse_double(value, qual);
    else if (qual == "operators.grid_points") cfg.grid_points = static_cast<int>(parse_int(value, qual));
    else if (qual == "operators.potential") cfg.family = family_from_name(value);
    else if (qual == "operators.depth") cfg.depth = parse_double(value, qual);
    else if (qual == "operators.range") cfg.range = parse_double(value, qual);
    else if (qual == "operators.alpha") cfg.alpha = parse_double(value, qual);
    else if (qual == "operators.certify_samples") cfg.certify_samples = static_cast<int>(parse_int(value, qual));
    else if (qual == "ssf_resolvent.shift") cfg.shift = parse_double(value, qual);
    else if (qual == "ssf_resolvent.power") cfg.power = static_cast<int>(parse_int(value, qual));
    else if (qual == "ssf_resolvent.eta_factors") cfg.eta_factors = parse_double_list(value, qual);
    else if (qual == "ssf_resolvent.fixed_grid_eta_count") cfg.fixed_grid_eta_count = static_cast<int>(parse_int(value, qual));
    else if (qual == "ssf_resolvent.beta") cfg.beta = parse_double(value, qual);
    else if (qual == "spectral.test_functions") cfg.test_functions = parse_test_functions(value);
    else if (qual == "spectral.curve_points") cfg.curve_uniform_points = static_cast<int>(parse_int(value, qual));
    else if (qual == "excess.r_schedule") cfg.r_schedule = parse_double_list(value, qual);
    else if (qual == "excess.plateau") cfg.plateau = parse_double(value, qual);
    else if (qual == "scattering.k_max") cfg.k_max = parse_double(value, qual);
    else if (qual == "scattering.k_points") cfg.k_points = static_cast<int>(parse_int(value, qual));
    else if (qual == "scattering.lmax") cfg.lmax = static_cast<int>(parse_int(value, qual));
    else if (qual == "probes.wtrace_box") cfg.wtrace_box = parse_double(value, qual);
    else if (qual == "probes.wtrace_points") cfg.wtrace_points = static_cast<int>(parse_int(value, qual));
    else if (qual == "probes.wtrace_refinements") cfg.wtrace_refinements = static_cast<int>(parse_int(value, qual));
    else if (qual == "probes.boundary_box") cfg.boundary_box = parse_double(value, qual);
    else if (qual == "probes.boundary_points") cfg.boundary_points = static_cast<int>(parse_int(value, qual));
    else if (qual == "probes.boundary_lambda") cfg.boundary_lambda = parse_double(value, qual);
    else if (qual == "probes.boundary_eta0") cfg.boundary_eta0 = parse_double(value, qual);
    else if (qual == "probes.boundary_eta_count") cfg.boundary_eta_count = static_cast<int>(parse_int(value, qual));
    else if (qual == "cli.lambda_grid") cfg.lambda_grid = parse_double_list(value, qual);
    else if (qual == "cli.tolerance_friedel") cfg.tolerance_friedel = parse_double(value, qual);
    else if (qual == "cli.tolerance_krein") cfg.tolerance_krein = parse_double(value, qual);
    else if (qual == "cli.tolerance_route") cfg.tolerance_route = parse_double(value, qual);
    else if (qual == "cli.threads") cfg.threads = static_cast<int>(parse_int(value, qual));
    else fail(errc::config_error, "unknown key '" + qual + "'");
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::config_error, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.dimension != 1 && cfg.dimension != 3)
    fail(errc::config_error, "dimension must be 1 or 3");
  if (cfg.grid_points < 3) fail(errc::config_error, "grid_points must be >= 3");
  if (!(cfg.box_half_width > 0.0)) fail(errc::config_error, "box_half_width must be positive");
  if (!(cfg.range > 0.0)) fail(errc::config_error, "potential range must be positive");
  if (!(cfg.alpha > cfg.dimension + 3))
    fail(errc::config_error, "alpha must exceed dimension + 3 (decay certificate window)");
  if (cfg.certify_samples < 1000) fail(errc::config_error, "certify_samples must be >= 1000");
  if (cfg.shift != 0.0 && !(cfg.shift > 1.0))
    fail(errc::config_error,
         "shift must exceed 1 so the transformed spectra stay inside (0,1)");
  if (cfg.power < 1) fail(errc::config_error, "power must be a positive integer");
  if (cfg.eta_factors.size() < 2)
    fail(errc::config_error, "eta_factors needs at least 2 entries");
  for (std::size_t i = 1; i < cfg.eta_factors.size(); ++i)
    if (!(cfg.eta_factors[i] < cfg.eta_factors[i - 1]))
      fail(errc::config_error, "eta_factors must decrease");
  if (cfg.fixed_grid_eta_count < 3)
    fail(errc::config_error, "fixed_grid_eta_count must be >= 3");
  if (cfg.beta != 0.0) {
    const double hi = 0.5 * (cfg.alpha - cfg.dimension);
    if (!(cfg.beta > 1.5) || !(cfg.beta < hi))
      fail(errc::config_error, "beta outside the window (1.5, (alpha-n)/2)");
  }
  if (cfg.r_schedule.size() < 4)
    fail(errc::config_error, "r_schedule needs >= 4 radii");
  for (std::size_t i = 1; i < cfg.r_schedule.size(); ++i)
    if (!(cfg.r_schedule[i] > cfg.r_schedule[i - 1]))
      fail(errc::config_error, "r_schedule must increase");
  if (!(cfg.plateau > 0.0) || !(cfg.plateau < 1.0))
    fail(errc::config_error, "plateau must lie in (0, 1)");
  if (cfg.plateau * cfg.r_schedule.back() > cfg.box_half_width / 5.0 + 1e-12)
    fail(errc::config_error,
         "largest cutoff plateau exceeds L/5 (box-contamination guard)");
  if (cfg.lambda_grid.empty()) fail(errc::config_error, "lambda_grid is empty");
  if (!(cfg.lambda_grid.front() > 0.0))
    fail(errc::config_error,
         "lambda_grid must be positive (the sum-rule identity lives on (0, inf))");
  for (std::size_t i = 1; i < cfg.lambda_grid.size(); ++i)
    if (!(cfg.lambda_grid[i] > cfg.lambda_grid[i - 1]))
      fail(errc::config_error, "lambda_grid must increase");
  if (!(cfg.k_max > 0.0)) fail(errc::config_error, "k_max must be positive");
  if (cfg.k_points < 16) fail(errc::config_error, "k_points must be >= 16");
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[experiment]\n"
     << "dimension = " << c.dimension << "\n"
     << "seed = " << c.seed << "\n"
     << "output = " << c.output_dir << "\n"
     << "[operators]\n"
     << "box_half_width = " << c.box_half_width << "\n"
     << "grid_points = " << c.grid_points << "\n"
     << "potential = " << family_name(c.family) << "\n"
     << "depth = " << c.depth << "\n"
     << "range = " << c.range << "\n"
     << "alpha = " << c.alpha << "\n"
     << "certify_samples = " << c.certify_samples << "\n"
     << "[ssf_resolvent]\n"
     << "shift = " << c.shift << "\n"
     << "power = " << c.power << "\n"
     << "eta_factors = " << list_text(c.eta_factors) << "\n"
     << "fixed_grid_eta_count = " << c.fixed_grid_eta_count << "\n"
     << "beta = " << c.beta << "\n"
     << "[spectral]\n"
     << "test_functions = " << test_functions_text(c.test_functions) << "\n"
     << "curve_points = " << c.curve_uniform_points << "\n"
     << "[excess]\n"
     << "r_schedule = " << list_text(c.r_schedule) << "\n"
     << "plateau = " << c.plateau << "\n"
     << "[scattering]\n"
     << "k_max = " << c.k_max << "\n"
     << "k_points = " << c.k_points << "\n"
     << "lmax = " << c.lmax << "\n"
     << "[probes]\n"
     << "wtrace_box = " << c.wtrace_box << "\n"
     << "wtrace_points = " << c.wtrace_points << "\n"
     << "wtrace_refinements = " << c.wtrace_refinements << "\n"
     << "boundary_box = " << c.boundary_box << "\n"
     << "boundary_points = " << c.boundary_points << "\n"
     << "boundary_lambda = " << c.boundary_lambda << "\n"
     << "boundary_eta0 = " << c.boundary_eta0 << "\n"
     << "boundary_eta_count = " << c.boundary_eta_count << "\n"
     << "[cli]\n"
     << "lambda_grid = " << list_text(c.lambda_grid) << "\n"
     << "tolerance_friedel = " << c.tolerance_friedel << "\n"
     << "tolerance_krein = " << c.tolerance_krein << "\n"
     << "tolerance_route = " << c.tolerance_route << "\n"
     << "threads = " << c.threads << "\n";
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical serialized form.
  const std::string text = canonical_text(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

const std::map<std::string, std::string>& preset_table() {
  static const std::map<std::string, std::string> presets{
      {"gauss1d", R"(
[experiment]
dimension = 1
[operators]
box_half_width = 100
grid_points = 8000
potential = gaussian
depth = -1
range = 1
alpha = 9
[excess]
r_schedule = 5,10,20,40
[cli]
lambda_grid = 0.25,0.7857142857142857,1.3214285714285714,1.8571428571428572,2.392857142857143,2.9285714285714284,3.4642857142857144,4.0
tolerance_friedel = 0.05
)"},
      {"well3d", R"(
[experiment]
dimension = 3
[operators]
box_half_width = 60
grid_points = 2400
potential = square_well
depth = -2
range = 1
alpha = 7
[excess]
r_schedule = 3,6,12,24
[cli]
lambda_grid = 0.25,0.7857142857142857,1.3214285714285714,1.8571428571428572,2.392857142857143,2.9285714285714284,3.4642857142857144,4.0
tolerance_friedel = 0.08
)"},
      {"gauss1d-desk", R"(
[experiment]
dimension = 1
[operators]
box_half_width = 20
grid_points = 2000
potential = gaussian
depth = -1
range = 1
alpha = 9
[excess]
r_schedule = 1,2,3,4
[cli]
lambda_grid = 0.3,0.65,1.0,1.35,1.7,2.05,2.4,2.75,3.1,3.45,3.8,4.15,4.5,4.85,5.2,5.55,5.9,6.25,6.6,6.95
)"},
      {"square1d-desk", R"(
[experiment]
dimension = 1
[operators]
box_half_width = 20
grid_points = 2000
potential = square_well
depth = -2
range = 1
alpha = 9
[excess]
r_schedule = 1,2,3,4
[cli]
lambda_grid = 0.2,0.5,0.8,1.1,1.4,1.7,2.0,2.3,2.6,2.9,3.2,3.5,3.8,4.1,4.4,4.7,5.0
)"},
      {"probe1d", R"(
[experiment]
dimension = 1
[operators]
box_half_width = 4
grid_points = 400
potential = gaussian
depth = -1
range = 1
alpha = 9
[excess]
r_schedule = 0.2,0.4,0.6,0.8
[probes]
wtrace_box = 12
wtrace_points = 150
wtrace_refinements = 4
boundary_box = 4
boundary_points = 400
boundary_lambda = 1.0
boundary_eta0 = 0.1
boundary_eta_count = 7
[cli]
lambda_grid = 1.0
)"},
  };
  return presets;
}

}  // namespace

ExperimentConfig load_preset(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const auto& [k, v] : table) known += (known.empty() ? "" : ", ") + k;
    fail(errc::config_error, "unknown preset '" + name + "' (have: " + known + ")");
  }
  return parse_config_text(it->second);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : preset_table()) names.push_back(k);
  return names;
}

void apply_tolerance_override(ExperimentConfig& cfg, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    fail(errc::config_error, "tolerance override must look like KEY=VALUE");
  const std::string key = trim(spec.substr(0, eq));
  const double value = parse_double(spec.substr(eq + 1), key);
  if (key == "tolerance_friedel") cfg.tolerance_friedel = value;
  else if (key == "tolerance_krein") cfg.tolerance_krein = value;
  else if (key == "tolerance_route") cfg.tolerance_route = value;
  else fail(errc::config_error, "unknown tolerance key '" + key + "'");
}

}  // namespace ssf
