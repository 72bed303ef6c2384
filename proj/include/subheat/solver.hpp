#pragma once

#include <limits>
#include <string>
#include <vector>

#include "subheat/geometry.hpp"
#include "subheat/grid.hpp"
#include "subheat/group.hpp"

namespace subheat {

// Initial-boundary value problem
//   u_t = div_H(|grad_H u|^{p-2} grad_H u)
//         + alpha * sum_i |u|^{q_i-1} u
//         + beta  * sum_j |grad_H u|^{r_j}
//         + gamma * sum_k |u|^{s_k-1} u
// on the grid box with zero Dirichlet data and nonnegative initial data.
struct ProblemSpec {
  GroupSpec group;
  Grid domain;
  Field u0;
  double p = 2.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::vector<double> q_list;
  std::vector<double> r_list;
  std::vector<double> s_list;

  void validate() const;
};

struct SolverConfig {
  double flux_regularization = 1e-8;  // epsilon added under the flux power
  double cfl_safety = 0.4;
  double blowup_threshold = 1e6;
  double min_dt = 1e-12;
  double t_end = 1.0;
  int trace_stride = 1;
  // Extras beyond the required knobs: snapshot_stride stores full fields every
  // so many steps (0 = off), kappa enables the energy column of the trace.
  int snapshot_stride = 0;
  double kappa = std::numeric_limits<double>::quiet_NaN();

  void validate() const;
};

enum class Outcome { Completed, BlowUp, Unstable };

const char* outcome_name(Outcome o);

struct TimedField {
  double t = 0.0;
  Field field;
};

struct SolveTrace {
  std::vector<double> times;
  std::vector<double> sup_norms;
  std::vector<double> energies;  // NaN entries when kappa is unset
  std::vector<double> dts;       // dt of the step that produced each sample
  Outcome outcome = Outcome::Completed;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  double max_dt = 0.0;
  long total_steps = 0;
  std::vector<TimedField> snapshots;
  std::string note;
};

// Regularized p-sublaplacian div_H((|grad_H u|^2 + eps)^{(p-2)/2} grad_H u).
Field p_sublaplacian(const GroupSpec& group, const Field& u, double p, double eps_reg);

// Zeroth and first order reaction terms; grad_h must be the horizontal
// gradient of u so the gradient work can be shared with the flux.
Field reaction_rhs(const ProblemSpec& problem, const Field& u,
                   const std::vector<Field>& grad_h);

// Adaptive step size c*h^2 / (2*N1*D + h*G + h^2*S) with D the largest flux
// coefficient (times p-1 when p > 2), G the gradient-term Lipschitz bound and
// S the zeroth-order one. Clipped below at min_dt.
double cfl_dt(const ProblemSpec& problem, const Field& u, const SolverConfig& config);

// One forward Euler step; boundary nodes are reset to zero afterwards.
Field step(const ProblemSpec& problem, const Field& u, double dt,
           const SolverConfig& config);

// Explicit time marching with blow-up detection. Blow-up is declared when the
// sup norm crosses blowup_threshold, or when the step size underflows min_dt
// while the sup norm is still growing; non-finite values classify as
// Unstable.
SolveTrace solve(const ProblemSpec& problem, const SolverConfig& config);

// (1/(kappa+1)) * integral of u^{kappa+1}, node quadrature with halved
// weights on boundary nodes. Rejects negative field values.
double energy_y(const Field& u, double kappa);

// Product-of-sines bump vanishing on the boundary, peak value = height.
Field sine_bump(const Grid& grid, double height);

}  // namespace subheat
