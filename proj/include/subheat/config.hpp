#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "subheat/grid.hpp"
#include "subheat/group.hpp"
#include "subheat/solver.hpp"

namespace subheat {

// Raised for malformed config text or unknown keys/scenarios. Semantic
// violations (inconsistent dimensions, out-of-range parameters) surface as
// std::invalid_argument from the domain types instead.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One experiment: scenario id, geometry, problem parameters, solver knobs
// and output location. default_config() fills scenario-specific values; a
// config file then overrides individual keys.
struct ExperimentConfig {
  std::string scenario = "custom";
  std::string group = "euclidean:2";  // euclidean:N or heisenberg
  std::vector<double> grid_lower = {-0.5, -0.5};
  std::vector<int> grid_extents = {33, 33};
  double grid_spacing = 0.03125;
  double p = 2.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::vector<double> q_list;
  std::vector<double> r_list;
  std::vector<double> s_list;
  double eps_reg = 1e-8;
  double cfl_safety = 0.4;
  double blowup_threshold = 1e6;
  double min_dt = 1e-12;
  double t_end = 1.0;
  int trace_stride = 1;
  int snapshot_stride = 0;
  double u0_height = 1.0;
  double u0_margin = 1.0;          // added on top of the profile floor
  std::vector<int> ladder = {1, 2, 4, 8};  // initial-data scalings for energy runs
  unsigned long long seed = 0;
  std::string out_dir = "out";

  GroupSpec make_group() const;
  Grid make_grid() const;
  SolverConfig make_solver() const;
  // Assembles the problem around the given initial data.
  ProblemSpec make_problem(Field u0) const;
};

const std::vector<std::string>& known_scenarios();

ExperimentConfig default_config(const std::string& scenario);

// Flat key=value text, one pair per line, '#' starts a comment, list values
// comma-separated. The scenario key is applied first so remaining keys
// override that scenario's defaults.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace subheat
