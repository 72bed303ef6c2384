#include "subheat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace subheat {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const SolveTrace& trace) {
  std::ofstream out = open_out(path);
  out << "t,sup_norm,energy_y,dt\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << num(trace.times[i]) << ',' << num(trace.sup_norms[i]) << ',';
    if (std::isfinite(trace.energies[i])) out << num(trace.energies[i]);
    out << ',' << num(trace.dts[i]) << '\n';
  }
}

void write_slices_csv(const std::string& path, const SolveTrace& trace) {
  std::ofstream out = open_out(path);
  out << "t,x,u\n";
  for (const TimedField& snap : trace.snapshots) {
    const Grid& grid = snap.field.grid();
    std::vector<int> idx(static_cast<size_t>(grid.dim()));
    for (int a = 1; a < grid.dim(); ++a)
      idx[static_cast<size_t>(a)] = grid.extent(a) / 2;
    for (int i = 0; i < grid.extent(0); ++i) {
      idx[0] = i;
      out << num(snap.t) << ',' << num(grid.coordinate(0, i)) << ','
          << num(snap.field[grid.flat_index(idx)]) << '\n';
    }
  }
}

namespace {

nlohmann::ordered_json certificate_json(const SignCertificate& cert) {
  nlohmann::ordered_json j;
  j["name"] = cert.name;
  j["expected"] = cert.expected == SignExpectation::NonNegative ? "non-negative"
                                                                : "non-positive";
  j["min_value"] = cert.min_value;
  j["max_value"] = cert.max_value;
  j["worst_point"] = cert.worst_point;
  j["samples_per_axis"] = cert.samples_per_axis;
  j["total_samples"] = cert.total_samples;
  j["low_resolution"] = cert.low_resolution;
  j["passed"] = cert.passed;
  return j;
}

nlohmann::ordered_json ordering_json(const OrderingReport& rep) {
  nlohmann::ordered_json j;
  j["max_excess"] = rep.max_excess;
  j["tolerance"] = rep.tolerance;
  j["compared_samples"] = rep.compared_samples;
  j["compared_nodes"] = rep.compared_nodes;
  j["violation_found"] = rep.violation_found;
  j["first_violation_time"] = rep.first_violation_time;
  j["first_violation_point"] = rep.first_violation_point;
  j["hypotheses_hold"] = rep.hypotheses_hold;
  j["hypothesis_note"] = rep.hypothesis_note;
  j["passed"] = rep.passed;
  return j;
}

}  // namespace

nlohmann::ordered_json summary_json(const ScenarioResult& result) {
  const ExperimentConfig& cfg = result.config;
  nlohmann::ordered_json j;
  j["scenario"] = cfg.scenario;
  j["group"] = cfg.group;
  j["grid"] = {{"lower", cfg.grid_lower},
               {"extents", cfg.grid_extents},
               {"spacing", cfg.grid_spacing}};
  j["problem"] = {{"p", cfg.p},           {"alpha", cfg.alpha},
                  {"beta", cfg.beta},     {"gamma", cfg.gamma},
                  {"q_list", cfg.q_list}, {"r_list", cfg.r_list},
                  {"s_list", cfg.s_list}};
  j["solver"] = {{"eps_reg", cfg.eps_reg},
                 {"cfl_safety", cfg.cfl_safety},
                 {"blowup_threshold", cfg.blowup_threshold},
                 {"min_dt", cfg.min_dt},
                 {"t_end", cfg.t_end},
                 {"trace_stride", cfg.trace_stride},
                 {"snapshot_stride", cfg.snapshot_stride}};
  j["u0"] = {{"height", cfg.u0_height}, {"margin", cfg.u0_margin}};
  j["ladder"] = cfg.ladder;
  j["seed"] = cfg.seed;

  j["outcome"] = outcome_name(result.outcome);
  j["passed"] = result.passed;
  j["max_sup_norm"] = result.max_sup_norm;
  j["min_node_value"] = result.min_node_value;
  j["bound_checked"] = result.bound_checked;
  j["bound"] = result.bound;
  j["bound_held"] = result.bound_held;
  j["blowup_time"] = result.blowup_time;
  j["blowup_window"] = result.blowup_window;
  j["ladder_rung"] = result.ladder_rung;
  j["ladder_blowup_times"] = result.ladder_blowup_times;
  j["energy_kappa"] = result.energy_kappa;
  j["fitted_slope"] = result.fitted_slope;
  j["required_slope"] = result.required_slope;
  j["parameters"] = result.parameters;

  j["certificates"] = nlohmann::ordered_json::array();
  for (const SignCertificate& cert : result.certificates)
    j["certificates"].push_back(certificate_json(cert));
  if (result.has_ordering)
    j["ordering"] = ordering_json(result.ordering);
  else
    j["ordering"] = nullptr;

  j["total_steps"] = result.trace.total_steps;
  j["recorded_samples"] = result.trace.times.size();
  j["max_dt"] = result.trace.max_dt;
  j["solver_note"] = result.trace.note;
  j["notes"] = result.notes;
  return j;
}

void write_summary_json(const std::string& path, const ScenarioResult& result,
                        double wall_seconds) {
  nlohmann::ordered_json j = summary_json(result);
  j["wall_seconds"] = wall_seconds;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace subheat
