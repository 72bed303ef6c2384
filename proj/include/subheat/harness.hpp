#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subheat/barriers.hpp"
#include "subheat/config.hpp"
#include "subheat/solver.hpp"

namespace subheat {

// Both sides of the monotone vector inequality
//   <|a|^{s-2}a - |b|^{s-2}b, a - b> >= (4/s^2) ||a|^{(s-2)/2}a - |b|^{(s-2)/2}b|^2
// for s > 1, with the power map extended by 0 at the origin. With this
// constant the bound is a classical fact for s >= 2 but false on (1, 2):
// antipodal vectors give lhs = 4|a|^s against rhs = (16/s^2)|a|^s. The
// sides are reported as evaluated, in extended precision so margins near
// equality are meaningful, and no attempt is made to patch the constant.
struct LemmaGap {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin() const { return lhs - rhs; }
};

LemmaGap lemma_gap(std::span<const double> a, std::span<const double> b, double sigma);

struct LemmaSweepReport {
  long samples = 0;
  double min_margin = 0.0;
  double worst_sigma = 0.0;
  std::vector<double> worst_a, worst_b;
  long equality_samples = 0;
  // At s = 2 both sides collapse to |a-b|^2; this tracks the largest
  // relative gap seen there.
  double equality_max_rel_error = 0.0;
  bool passed = false;
};

// Randomized inequality sweep over dimensions 1-4, components in [-10, 10],
// s in (1, 10], plus an equality sub-sweep at s = 2. Deterministic for a
// fixed seed. Pass thresholds: margin >= -1e-12, equality error <= 1e-12.
// Because the sampled range includes s < 2 the sweep finds genuine
// counterexamples and reports passed = false with the worst triple.
LemmaSweepReport lemma_sweep(long samples, unsigned long long seed);

// Slack granted to discrete comparisons: 10*h^2 spatial plus 10*dt temporal.
double ordering_tolerance(double spacing, double max_dt);

struct OrderingReport {
  double max_excess = 0.0;  // max over samples of (below - above)+
  double tolerance = 0.0;
  long compared_samples = 0;
  long compared_nodes = 0;
  bool violation_found = false;  // some node exceeded the tolerance
  double first_violation_time = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> first_violation_point;
  bool hypotheses_hold = true;  // comparison hypotheses gate, informational
  std::string hypothesis_note;
  bool passed = false;
};

// Verifies below <= above + tolerance at every node of every paired sample.
// Traces must share grids and sample times. When a problem is supplied its
// parameters are checked against the comparison hypotheses (every r_j >= p/2
// when beta > 0; some parameter positive or all three zero); failures are
// reported in the note, never enforced.
OrderingReport check_ordering(const std::vector<TimedField>& below,
                              const std::vector<TimedField>& above,
                              double tolerance,
                              const ProblemSpec* problem = nullptr);

struct ConvergenceReport {
  std::string name;
  std::vector<double> spacings;
  std::vector<double> sup_errors;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;  // every error at rounding level; no order to fit
  double min_order = 0.0;
  bool passed = false;
};

// Convergence of the discrete horizontal gradient on the radial power
// |x'|^b against b|x'|^{b-1}. The sup error is taken at the coarsest
// grid's nodes with first-stratum radius >= 3*h_coarsest, a probe set
// shared by every grid in the sweep (resolutions must be multiples of
// the coarsest), so the fitted slope measures truncation order only.
ConvergenceReport gradient_identity_convergence(
    const GroupSpec& group, double b,
    const std::vector<int>& resolutions = {16, 32, 64}, double min_order = 1.9);

// Same protocol for the discrete horizontal divergence of x'/|x'|^b against
// (N1 - b)/|x'|^b.
ConvergenceReport divergence_identity_convergence(
    const GroupSpec& group, double b,
    const std::vector<int>& resolutions = {16, 32, 64}, double min_order = 1.9);

// Worst relative error of the discrete operator against the constant
// closed-form value it must reproduce on the power barrier (base point
// (-1, 0), unit box, Euclidean plane).
double operator_oracle_rel_error(double p, double k2, double h, double eps_reg);

struct ScenarioResult {
  ExperimentConfig config;
  Outcome outcome = Outcome::Completed;
  double max_sup_norm = 0.0;
  double min_node_value = 0.0;  // most negative node seen in stored fields
  bool bound_checked = false;
  double bound = std::numeric_limits<double>::quiet_NaN();
  bool bound_held = false;
  std::map<std::string, double> parameters;  // closed-form constants in play
  std::vector<SignCertificate> certificates;
  bool has_ordering = false;
  OrderingReport ordering;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  double blowup_window = std::numeric_limits<double>::quiet_NaN();
  int ladder_rung = 0;  // profile start-time rung, or fitted initial-scale rung
  std::vector<double> ladder_blowup_times;  // energy runs: one entry per scale
  double energy_kappa = std::numeric_limits<double>::quiet_NaN();
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double required_slope = std::numeric_limits<double>::quiet_NaN();
  bool passed = false;
  std::vector<std::string> notes;
  SolveTrace trace;
};

// Boundedness scenarios: builds the regime's barrier, certifies its residual
// sign, solves, and asserts the sup norm stays under the barrier ceiling at
// every sample. Throws std::invalid_argument when the config violates the
// regime gates.
ScenarioResult run_boundedness(const ExperimentConfig& cfg);

// Blow-up scenarios: builds the self-similar profile, certifies its residual
// sign (tightening the start-time rung if needed), starts from the profile
// floor plus a margin, and asserts blow-up inside the certified window with
// the evolved solution staying above the shifted profile.
ScenarioResult run_blowup(const ExperimentConfig& cfg);

// Energy blow-up: runs a ladder of initial-data scalings, requires blow-up
// from some rung onward, and fits the growth exponent of the energy
// y = (1/(kappa+1)) integral u^{kappa+1} on the first blowing rung.
ScenarioResult run_energy_blowup(const ExperimentConfig& cfg);

// Free-form run with no closed-form assertions; fails only on instability.
ScenarioResult run_custom(const ExperimentConfig& cfg);

ScenarioResult run_scenario(const ExperimentConfig& cfg);

}  // namespace subheat
