#include "subheat/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

namespace subheat {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
}

unsigned long long parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as an unsigned integer");
  }
}

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
  std::vector<std::string> items;
  if (trim(value).empty()) return items;  // empty value clears the list
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("config key '" + key + "': empty list element");
    items.push_back(item);
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(key, value)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split_list(key, value)) out.push_back(parse_int(key, item));
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    cfg.scenario = value;  // validated by default_config before overrides
  } else if (key == "group") {
    cfg.group = value;
  } else if (key == "grid_lower") {
    cfg.grid_lower = parse_double_list(key, value);
  } else if (key == "grid_extents") {
    cfg.grid_extents = parse_int_list(key, value);
  } else if (key == "grid_spacing") {
    cfg.grid_spacing = parse_double(key, value);
  } else if (key == "p") {
    cfg.p = parse_double(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_double(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_double(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_double(key, value);
  } else if (key == "q_list") {
    cfg.q_list = parse_double_list(key, value);
  } else if (key == "r_list") {
    cfg.r_list = parse_double_list(key, value);
  } else if (key == "s_list") {
    cfg.s_list = parse_double_list(key, value);
  } else if (key == "eps_reg") {
    cfg.eps_reg = parse_double(key, value);
  } else if (key == "cfl_safety") {
    cfg.cfl_safety = parse_double(key, value);
  } else if (key == "blowup_threshold") {
    cfg.blowup_threshold = parse_double(key, value);
  } else if (key == "min_dt") {
    cfg.min_dt = parse_double(key, value);
  } else if (key == "t_end") {
    cfg.t_end = parse_double(key, value);
  } else if (key == "trace_stride") {
    cfg.trace_stride = parse_int(key, value);
  } else if (key == "snapshot_stride") {
    cfg.snapshot_stride = parse_int(key, value);
  } else if (key == "u0_height") {
    cfg.u0_height = parse_double(key, value);
  } else if (key == "u0_margin") {
    cfg.u0_margin = parse_double(key, value);
  } else if (key == "ladder") {
    cfg.ladder = parse_int_list(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

GroupSpec ExperimentConfig::make_group() const {
  if (group == "heisenberg") return make_heisenberg();
  const std::string prefix = "euclidean:";
  if (group.rfind(prefix, 0) == 0) {
    const std::string tail = group.substr(prefix.size());
    const int n1 = parse_int("group", tail);
    if (n1 < 1) throw ConfigError("config key 'group': euclidean:N needs N >= 1");
    return make_euclidean(n1);
  }
  throw ConfigError("config key 'group': expected euclidean:N or heisenberg, got '" +
                    group + "'");
}

Grid ExperimentConfig::make_grid() const {
  return Grid(grid_lower, grid_extents, grid_spacing);
}

SolverConfig ExperimentConfig::make_solver() const {
  SolverConfig sc;
  sc.flux_regularization = eps_reg;
  sc.cfl_safety = cfl_safety;
  sc.blowup_threshold = blowup_threshold;
  sc.min_dt = min_dt;
  sc.t_end = t_end;
  sc.trace_stride = trace_stride;
  sc.snapshot_stride = snapshot_stride;
  return sc;
}

ProblemSpec ExperimentConfig::make_problem(Field u0) const {
  ProblemSpec problem;
  problem.group = make_group();
  problem.domain = make_grid();
  problem.u0 = std::move(u0);
  problem.p = p;
  problem.alpha = alpha;
  problem.beta = beta;
  problem.gamma = gamma;
  problem.q_list = q_list;
  problem.r_list = r_list;
  problem.s_list = s_list;
  return problem;
}

const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> ids = {
      "boundedness-3.2i", "boundedness-3.2ii", "boundedness-3.5",
      "blowup-3.3",       "blowup-3.4",        "blowup-3.6",
      "custom"};
  return ids;
}

ExperimentConfig default_config(const std::string& scenario) {
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  auto boundedness = [&cfg] {
    cfg.t_end = 5.0;
    cfg.trace_stride = 25;
    cfg.snapshot_stride = 2000;
  };
  auto profile_domain = [&cfg] {
    // Wider box so the profile support fits with a two-node clearance.
    cfg.grid_lower = {-1.25, -1.25};
    cfg.grid_spacing = 0.078125;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 1;
  };
  if (scenario == "custom") return cfg;
  if (scenario == "boundedness-3.2i") {
    boundedness();
    cfg.alpha = -1.0;
    cfg.beta = 1.0;
    cfg.q_list = {2.0};
    cfg.r_list = {1.5};
    return cfg;
  }
  if (scenario == "boundedness-3.2ii") {
    boundedness();
    cfg.alpha = 1.0;
    cfg.beta = -1.0;
    cfg.q_list = {1.0};
    cfg.r_list = {2.0};
    return cfg;
  }
  if (scenario == "boundedness-3.5") {
    boundedness();
    cfg.alpha = 1.0;
    cfg.gamma = -1.0;
    cfg.q_list = {3.0};
    cfg.s_list = {2.0};
    return cfg;
  }
  if (scenario == "blowup-3.3") {
    profile_domain();
    cfg.alpha = 1.0;
    cfg.beta = -1.0;
    cfg.q_list = {3.0};
    cfg.r_list = {1.5};
    return cfg;
  }
  if (scenario == "blowup-3.6") {
    profile_domain();
    cfg.alpha = 1.0;
    cfg.gamma = -1.0;
    cfg.q_list = {3.0};
    cfg.s_list = {1.5};
    return cfg;
  }
  if (scenario == "blowup-3.4") {
    cfg.alpha = -1.0;
    cfg.beta = 1.0;
    cfg.q_list = {1.0};
    cfg.r_list = {3.0};
    cfg.t_end = 2.0;
    return cfg;
  }
  throw ConfigError("unknown scenario '" + scenario + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
  struct Pair {
    std::string key, value;
    int line;
  };
  std::vector<Pair> pairs;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  std::string scenario = "custom";
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value, got '" + line + "'");
    Pair pr{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (pr.key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (pr.key == "scenario") scenario = pr.value;
    pairs.push_back(std::move(pr));
  }
  ExperimentConfig cfg = default_config(scenario);
  for (const auto& pr : pairs) apply_key(cfg, pr.key, pr.value);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace subheat
